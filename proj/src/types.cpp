#include "tsphen/types.hpp"

#include <algorithm>
#include <map>

namespace tsphen {

const char* to_string(QualityCode code) {
    switch (code) {
        case QualityCode::OK: return "OK";
        case QualityCode::NOT_FINITE: return "NOT_FINITE";
        case QualityCode::DEGENERATE_INPUT: return "DEGENERATE_INPUT";
        case QualityCode::TOO_SHORT: return "TOO_SHORT";
        case QualityCode::NO_CONVERGENCE: return "NO_CONVERGENCE";
    }
    return "UNKNOWN";
}

std::optional<QualityCode> quality_code_from_string(const std::string& name) {
    static const std::map<std::string, QualityCode> table = {
        {"OK", QualityCode::OK},
        {"NOT_FINITE", QualityCode::NOT_FINITE},
        {"DEGENERATE_INPUT", QualityCode::DEGENERATE_INPUT},
        {"TOO_SHORT", QualityCode::TOO_SHORT},
        {"NO_CONVERGENCE", QualityCode::NO_CONVERGENCE},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> class_list(std::span<const std::string> labels) {
    std::vector<std::string> classes(labels.begin(), labels.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

Dataset build_dataset(std::vector<TimeSeries> series) {
    Dataset ds;
    ds.series = std::move(series);
    std::vector<std::string> labels;
    for (const auto& s : ds.series)
        if (s.label) labels.push_back(*s.label);
    ds.classes = class_list(labels);
    ds.class_counts.assign(ds.classes.size(), 0);
    for (const auto& s : ds.series) {
        if (!s.label) continue;
        auto it = std::lower_bound(ds.classes.begin(), ds.classes.end(), *s.label);
        ds.class_counts[static_cast<std::size_t>(it - ds.classes.begin())] += 1;
    }
    return ds;
}

}  // namespace tsphen
