#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tsphen/csvio.hpp"
#include "tsphen/inference.hpp"
#include "tsphen/learn.hpp"
#include "tsphen/pipeline.hpp"
#include "tsphen/quality.hpp"
#include "tsphen/rng.hpp"
#include "tsphen/serialize.hpp"

namespace fs = std::filesystem;
using namespace tsphen;

namespace {

// scratch directory removed on scope exit
struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("tsphen_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// a labeled directory-mode dataset: two classes that differ in lag-1
// autocorrelation, long enough for every default feature
void write_two_class_dataset(const fs::path& dir, int per_class = 6, int length = 150) {
    std::string labels = "series_id,label\n";
    rng::SplitMix64 gen(915);
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < per_class; ++i) {
            const std::string id =
                std::string(c == 0 ? "flat" : "walk") + std::to_string(i);
            std::string body;
            double x = 0.0;
            for (int t = 0; t < length; ++t) {
                const double g = gen.next_gaussian();
                x = (c == 0) ? g : x + g;
                body += csv::format_double(x) + "\n";
            }
            write_file(dir / (id + ".csv"), body);
            labels += id + "," + (c == 0 ? "flat" : "walk") + "\n";
        }
    }
    write_file(dir / "labels.csv", labels);
}

std::string slurp(const fs::path& p) { return csv::read_text(p); }

}  // namespace

// ---------------------------------------------------------------------------
// CSV primitives
// ---------------------------------------------------------------------------

TEST_CASE("format_double round-trips arbitrary doubles bitwise") {
    rng::SplitMix64 gen(77);
    int checked = 0;
    while (checked < 2000) {
        const std::uint64_t bits = gen.next();
        double x;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&x, &bits, sizeof(x));
        if (std::isnan(x)) continue;
        const double back = csv::parse_double(csv::format_double(x));
        std::uint64_t back_bits;
        std::memcpy(&back_bits, &back, sizeof(back));
        std::uint64_t x_bits;
        std::memcpy(&x_bits, &x, sizeof(x));
        CHECK(back_bits == x_bits);
        ++checked;
    }
    CHECK(csv::parse_double(csv::format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(csv::format_double(std::nan("")) == "nan");
    CHECK(csv::format_double(HUGE_VAL) == "inf");
    CHECK(csv::format_double(-HUGE_VAL) == "-inf");
}

TEST_CASE("parse_double accepts missing markers and rejects junk") {
    CHECK(std::isnan(csv::parse_double("")));
    CHECK(std::isnan(csv::parse_double("nan")));
    CHECK(std::isnan(csv::parse_double("NaN")));
    CHECK(std::isnan(csv::parse_double("NA")));
    CHECK(csv::parse_double("inf") == HUGE_VAL);
    CHECK(csv::parse_double("-inf") == -HUGE_VAL);
    CHECK(csv::parse_double("+2.5") == 2.5);
    CHECK(csv::parse_double("  3.25\t") == 3.25);
    CHECK_THROWS_AS(csv::parse_double("abc"), ConfigError);
    CHECK_THROWS_AS(csv::parse_double("1.5x"), ConfigError);
    CHECK_THROWS_AS(csv::parse_double("1 2"), ConfigError);
}

TEST_CASE("read_csv handles quoting, escapes, and line endings") {
    TempDir tmp;
    const fs::path p = tmp.path / "t.csv";
    write_file(p, "a,b,c\r\n1,\"x,y\",\"he said \"\"hi\"\"\"\n\n2,\"multi\nline\",plain\n");
    const csv::Table table = csv::read_csv(p);
    CHECK(table.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0] == std::vector<std::string>{"1", "x,y", "he said \"hi\""});
    CHECK(table.rows[1] == std::vector<std::string>{"2", "multi\nline", "plain"});

    write_file(p, "a,b\n1,2,3\n");
    CHECK_THROWS_AS(csv::read_csv(p), ConfigError);
    write_file(p, "a,b\n\"open,2\n");
    CHECK_THROWS_AS(csv::read_csv(p), ConfigError);
}

TEST_CASE("write_csv_atomic quotes exactly the cells that need it") {
    TempDir tmp;
    const fs::path p = tmp.path / "q.csv";
    csv::Table table;
    table.header = {"id", "note"};
    table.rows = {{"r1", "comma, inside"}, {"r2", "quote \" inside"}, {"r3", "plain"}};
    csv::write_csv_atomic(p, table);
    const std::string text = slurp(p);
    CHECK(text ==
          "id,note\nr1,\"comma, inside\"\nr2,\"quote \"\" inside\"\nr3,plain\n");
    const csv::Table back = csv::read_csv(p);
    CHECK(back.header == table.header);
    CHECK(back.rows == table.rows);
}

TEST_CASE("fnv1a_hex matches the published test vectors") {
    // reference values for the 64-bit FNV-1a parameters
    CHECK(csv::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(csv::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(csv::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("write_text_atomic replaces content and leaves no temp files") {
    TempDir tmp;
    const fs::path p = tmp.path / "f.txt";
    csv::write_text_atomic(p, "first\n");
    csv::write_text_atomic(p, "second\n");
    CHECK(slurp(p) == "second\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.path)) ++entries;
    CHECK(entries == 1);
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

TEST_CASE("catalog JSON round-trip is the identity") {
    const FeatureCatalog catalog = FeatureCatalog::defaults();
    const std::string text = catalog_to_json(catalog);
    const FeatureCatalog back = catalog_from_json(text);
    CHECK(back.feature_ids() == catalog.feature_ids());
    CHECK(catalog_to_json(back) == text);
}

TEST_CASE("catalog_from_json rejects malformed input") {
    CHECK_THROWS_AS(catalog_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(catalog_from_json("{}"), ConfigError);  // not an array
    CHECK_THROWS_AS(catalog_from_json(R"([{"feature_id":"x"}])"), ConfigError);
    CHECK_THROWS_AS(
        catalog_from_json(
            R"([{"feature_id":"x","family":"NOPE","params":{},"min_length":4,"description":""}])"),
        ConfigError);
    CHECK_THROWS_AS(
        catalog_from_json(
            R"([{"feature_id":"x","family":"DIST","params":{"p":"high"},"min_length":4,"description":""}])"),
        ConfigError);
}

namespace {

FeatureMatrix tiny_labeled_matrix(std::vector<std::string>* labels_out) {
    std::vector<std::string> ids, labels;
    for (int i = 0; i < 10; ++i) {
        ids.push_back("s" + std::to_string(i));
        labels.push_back(i < 5 ? "lo" : "hi");
    }
    FeatureMatrix m(ids, {"f.one", "f.two"});
    rng::SplitMix64 gen(5);
    for (std::size_t r = 0; r < 10; ++r) {
        m.set(r, 0, {(r < 5 ? 0.0 : 4.0) + 0.1 * gen.next_double(), QualityCode::OK});
        m.set(r, 1, {gen.next_double(), QualityCode::OK});
    }
    if (labels_out) *labels_out = labels;
    return m;
}

}  // namespace

TEST_CASE("ranking JSON round-trip is the identity") {
    std::vector<std::string> labels;
    const FeatureMatrix m = tiny_labeled_matrix(&labels);
    const RankingResult ranking = rank_features(m, labels, 99, 7, 0.05, 1);
    const std::string text = ranking_to_json(ranking);
    const RankingResult back = ranking_from_json(text);
    CHECK(ranking_to_json(back) == text);
    CHECK(back.features.size() == ranking.features.size());
    CHECK(back.n_significant == ranking.n_significant);
    CHECK(back.features[0].feature_id == ranking.features[0].feature_id);
    CHECK(back.features[0].class_summaries.size() == 2);
}

TEST_CASE("classifier report JSON round-trip is the identity") {
    std::vector<std::string> labels;
    const FeatureMatrix m = tiny_labeled_matrix(&labels);
    const NormalizeResult norm = normalize_sigmoid(m);
    const ClassifierReport report = cross_validate(norm.matrix, labels, 2, 0.01, 3);
    const std::string text = classifier_report_to_json(report, norm.matrix.series_ids);
    const ClassifierReport back = classifier_report_from_json(text);
    CHECK(classifier_report_to_json(back, norm.matrix.series_ids) == text);
    CHECK(back.mean_balanced_accuracy == report.mean_balanced_accuracy);
    CHECK(back.confusion == report.confusion);
    CHECK(back.fold_of == report.fold_of);
}

TEST_CASE("filter report JSON merges zero-IQR drops into removals") {
    FilterReport report;
    report.kept_feature_ids = {"a", "b", "c"};
    report.removed = {{"d", RemovalReason::HAS_SPECIAL}};
    const std::string text = filter_report_to_json(report, {"b"});
    CHECK(text.find("\"ZERO_IQR\"") != std::string::npos);
    CHECK(text.find("\"HAS_SPECIAL\"") != std::string::npos);
    // "b" moved from kept to removed
    const auto kept_pos = text.find("\"kept\"");
    REQUIRE(kept_pos != std::string::npos);
    const auto removed_pos = text.find("\"removed\"");
    const auto b_pos = text.find("\"b\"");
    CHECK(b_pos > removed_pos);
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

TEST_CASE("load_config reads key = value lines with comments") {
    TempDir tmp;
    const fs::path p = tmp.path / "run.conf";
    write_file(p, "# header comment\ninput = data_dir\n\nn_perm = 250  # tail comment\n"
                  "seed=99\nregularization = 0.5\nmax_missing_fraction = 0.2\n");
    const ProjectConfig config = load_config(p);
    CHECK(config.input == "data_dir");
    CHECK(config.n_perm == 250);
    CHECK(config.seed == 99);
    CHECK(config.regularization == 0.5);
    CHECK(config.max_missing_fraction == 0.2);
    CHECK(config.k_folds == 10);  // untouched default
}

TEST_CASE("load_config fails loudly on typos and malformed lines") {
    TempDir tmp;
    const fs::path p = tmp.path / "run.conf";
    write_file(p, "n_prem = 10\n");
    CHECK_THROWS_AS(load_config(p), ConfigError);
    write_file(p, "just a line\n");
    CHECK_THROWS_AS(load_config(p), ConfigError);
    write_file(p, "n_perm = lots\n");
    CHECK_THROWS_AS(load_config(p), ConfigError);
    write_file(p, "threads = 1.5\n");
    CHECK_THROWS_AS(load_config(p), ConfigError);
}

TEST_CASE("ProjectConfig::validate enforces documented ranges") {
    ProjectConfig config;
    CHECK_NOTHROW(config.validate());
    auto expect_bad = [](auto mutate) {
        ProjectConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    expect_bad([](ProjectConfig& c) { c.n_perm = 0; });
    expect_bad([](ProjectConfig& c) { c.k_folds = 1; });
    expect_bad([](ProjectConfig& c) { c.top_k = 0; });
    expect_bad([](ProjectConfig& c) { c.threads = 0; });
    expect_bad([](ProjectConfig& c) { c.regularization = -0.1; });
    expect_bad([](ProjectConfig& c) { c.max_missing_fraction = 1.0; });
    expect_bad([](ProjectConfig& c) { c.output_dir = ""; });
}

// ---------------------------------------------------------------------------
// Feature matrix files
// ---------------------------------------------------------------------------

TEST_CASE("feature matrix survives the features/quality CSV round trip") {
    TempDir tmp;
    FeatureMatrix m({"s1", "s2", "s3"}, {"f.a", "f.b"});
    m.set(0, 0, {1.0 / 3.0, QualityCode::OK});
    m.set(0, 1, {std::nan(""), QualityCode::TOO_SHORT});
    m.set(1, 0, {-2.75e-300, QualityCode::OK});
    m.set(1, 1, {std::nan(""), QualityCode::DEGENERATE_INPUT});
    m.set(2, 0, {6.02e23, QualityCode::OK});
    m.set(2, 1, {std::nan(""), QualityCode::NOT_FINITE});

    write_feature_matrix(tmp.path / "f.csv", tmp.path / "q.csv", m);
    const FeatureMatrix back = read_feature_matrix(tmp.path / "f.csv", tmp.path / "q.csv");
    CHECK(back.series_ids == m.series_ids);
    CHECK(back.feature_ids == m.feature_ids);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            CHECK(back.quality_at(r, c) == m.quality_at(r, c));
            const double a = m.value(r, c), b = back.value(r, c);
            CHECK(((a == b) || (std::isnan(a) && std::isnan(b))));
        }
}

TEST_CASE("read_feature_matrix rejects mismatched files") {
    TempDir tmp;
    write_file(tmp.path / "f.csv", "series_id,f.a\ns1,1.5\n");
    write_file(tmp.path / "q.csv", "series_id,f.b\ns1,OK\n");
    CHECK_THROWS_AS(read_feature_matrix(tmp.path / "f.csv", tmp.path / "q.csv"), ConfigError);
    write_file(tmp.path / "q.csv", "series_id,f.a\ns1,WEIRD\n");
    CHECK_THROWS_AS(read_feature_matrix(tmp.path / "f.csv", tmp.path / "q.csv"), ConfigError);
    write_file(tmp.path / "q.csv", "series_id,f.a\ns2,OK\n");
    CHECK_THROWS_AS(read_feature_matrix(tmp.path / "f.csv", tmp.path / "q.csv"), ConfigError);
}

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

TEST_CASE("directory ingestion sorts, trims, and rejects per series") {
    TempDir tmp;
    const fs::path dir = tmp.path / "data";
    fs::create_directories(dir);
    write_file(dir / "zeta.csv", "value\n1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n");
    write_file(dir / "alpha.csv", "1.5\n2.5\n3.5\n4.5\n5.5\n6.5\n7.5\n8.5\n");  // no header
    write_file(dir / "lead.csv", "nan\n1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n11\n12\n13\n");
    write_file(dir / "hole.csv", "1\n2\nnan\n4\n5\n6\n7\n8\n9\n10\n");
    write_file(dir / "text.csv", "value\nfoo\nbar\n");
    write_file(dir / "hdr_only.csv", "value\n");
    write_file(dir / "labels.csv",
               "series_id,label\nzeta,a\nalpha,a\nlead,b\nhole,b\ntext,b\nhdr_only,b\n");

    ProjectConfig config;
    config.input = (dir).string();
    const IngestResult result = ingest(config);

    REQUIRE(result.dataset.size() == 3);
    CHECK(result.dataset.series[0].id == "alpha");  // sorted by id
    CHECK(result.dataset.series[1].id == "lead");
    CHECK(result.dataset.series[2].id == "zeta");
    CHECK(result.dataset.series[0].values.size() == 8);
    CHECK(result.dataset.series[1].values.size() == 13);  // leading nan trimmed
    CHECK(result.dataset.series[0].label == "a");

    std::map<std::string, std::string> reasons;
    for (const auto& r : result.rejected) reasons[r.series_id] = r.reason;
    CHECK(reasons.at("hole") == "interior_missing");
    CHECK(reasons.at("text") == "unparseable");
    CHECK(reasons.at("hdr_only") == "empty");

    // digests cover every input file plus the labels file
    CHECK(result.input_digests.size() == 7);
}

TEST_CASE("directory ingestion structural problems are fatal") {
    TempDir tmp;
    const fs::path dir = tmp.path / "data";
    fs::create_directories(dir);
    write_file(dir / "a.csv", "1\n2\n3\n4\n");
    ProjectConfig config;
    config.input = dir.string();

    SUBCASE("missing labels file") { CHECK_THROWS_AS(ingest(config), IoError); }
    SUBCASE("duplicate label rows") {
        write_file(dir / "labels.csv", "series_id,label\na,x\na,y\n");
        CHECK_THROWS_AS(ingest(config), ConfigError);
    }
    SUBCASE("label for a series that was never seen") {
        write_file(dir / "labels.csv", "series_id,label\na,x\nghost,x\n");
        CHECK_THROWS_AS(ingest(config), ConfigError);
    }
    SUBCASE("surviving series with no label") {
        write_file(dir / "b.csv", "5\n6\n7\n8\n");
        write_file(dir / "labels.csv", "series_id,label\na,x\n");
        CHECK_THROWS_AS(ingest(config), ConfigError);
    }
    SUBCASE("wrong labels header") {
        write_file(dir / "labels.csv", "id,class\na,x\n");
        CHECK_THROWS_AS(ingest(config), ConfigError);
    }
    SUBCASE("rejected series may stay labeled") {
        write_file(dir / "bad.csv", "value\nnot numbers\n");
        write_file(dir / "labels.csv", "series_id,label\na,x\nbad,x\n");
        const IngestResult result = ingest(config);
        CHECK(result.dataset.size() == 1);
        CHECK(result.rejected.size() == 1);
    }
}

TEST_CASE("long-format ingestion groups by series and checks t_index") {
    TempDir tmp;
    std::string text = "series_id,t_index,value\n";
    for (int t = 0; t < 6; ++t) text += "good," + std::to_string(t) + ",1.5\n";
    // out-of-order rows are fine as long as the sorted t_index is 0..n-1
    text += "swap,1,2.0\nswap,0,1.0\nswap,2,3.0\n";
    text += "gap,0,1.0\ngap,2,2.0\n";       // skips t=1
    text += "dup,0,1.0\ndup,0,2.0\n";       // duplicate t
    text += "junk,0,1.0\njunk,one,2.0\n";   // unparseable t_index
    write_file(tmp.path / "long.csv", text);
    write_file(tmp.path / "labels.csv",
               "series_id,label\ngood,a\nswap,a\ngap,b\ndup,b\njunk,b\n");

    ProjectConfig config;
    config.input = (tmp.path / "long.csv").string();
    config.labels = (tmp.path / "labels.csv").string();
    const IngestResult result = ingest(config);

    REQUIRE(result.dataset.size() == 2);
    CHECK(result.dataset.series[0].id == "good");
    CHECK(result.dataset.series[1].id == "swap");
    CHECK(result.dataset.series[1].values == std::vector<double>{1.0, 2.0, 3.0});

    std::map<std::string, std::string> reasons;
    for (const auto& r : result.rejected) reasons[r.series_id] = r.reason;
    CHECK(reasons.at("gap") == "bad_t_index");
    CHECK(reasons.at("dup") == "bad_t_index");
    CHECK(reasons.at("junk") == "unparseable");

    SUBCASE("wrong header is fatal") {
        write_file(tmp.path / "long.csv", "id,t,v\nx,0,1\n");
        CHECK_THROWS_AS(ingest(config), ConfigError);
    }
    SUBCASE("long format requires explicit labels") {
        config.labels.clear();
        CHECK_THROWS_AS(ingest(config), ConfigError);
    }
}

// ---------------------------------------------------------------------------
// Full pipeline drivers
// ---------------------------------------------------------------------------

TEST_CASE("compute + analyze + report produce the documented artifacts") {
    TempDir tmp;
    const fs::path data = tmp.path / "data";
    fs::create_directories(data);
    write_two_class_dataset(data);

    ProjectConfig config;
    config.input = data.string();
    config.output_dir = (tmp.path / "out").string();
    config.n_perm = 200;
    config.k_folds = 2;
    config.top_k = 8;

    std::ostringstream sink;
    REQUIRE(run_compute(config, sink) == 0);
    for (const char* name : {"features.csv", "quality.csv", "labels.csv", "catalog.json",
                             "manifest.json"})
        CHECK(fs::exists(tmp.path / "out" / name));

    REQUIRE(run_analyze(config, sink) == 0);
    for (const char* name : {"ranking.json", "top_features.csv", "classification.json",
                             "filter_report.json", "pca_scores.csv",
                             "correlation_matrix.csv"})
        CHECK(fs::exists(tmp.path / "out" / name));

    // the two groups differ exactly in their dependence structure
    const RankingResult ranking =
        ranking_from_json(slurp(tmp.path / "out" / "ranking.json"));
    CHECK(ranking.n_significant > 0);
    CHECK(ranking.features.front().observed_stat == 1.0);

    std::ostringstream report_text;
    REQUIRE(run_report(config, report_text) == 0);
    CHECK(report_text.str().find("chance level:") != std::string::npos);
    CHECK(fs::exists(tmp.path / "out" / "report.txt"));
    CHECK(slurp(tmp.path / "out" / "report.txt") == report_text.str());
}

TEST_CASE("pipeline outputs are byte-identical across reruns and thread counts") {
    TempDir tmp;
    const fs::path data = tmp.path / "data";
    fs::create_directories(data);
    write_two_class_dataset(data, 3, 80);

    auto run = [&](const std::string& outdir, int threads) {
        ProjectConfig config;
        config.input = data.string();
        config.output_dir = (tmp.path / outdir).string();
        config.n_perm = 60;
        config.k_folds = 3;
        config.top_k = 6;
        config.threads = threads;
        std::ostringstream sink;
        REQUIRE(run_compute(config, sink) == 0);
        REQUIRE(run_analyze(config, sink) == 0);
    };
    run("out1", 1);
    run("out2", 4);

    for (const char* name :
         {"features.csv", "quality.csv", "labels.csv", "catalog.json", "ranking.json",
          "top_features.csv", "classification.json", "filter_report.json", "pca_scores.csv",
          "correlation_matrix.csv"})
        CHECK_MESSAGE(slurp(tmp.path / "out1" / name) == slurp(tmp.path / "out2" / name),
                      name);
}

TEST_CASE("single-class analysis degrades to exit 2 with partial outputs") {
    TempDir tmp;
    const fs::path data = tmp.path / "data";
    fs::create_directories(data);
    std::string labels = "series_id,label\n";
    rng::SplitMix64 gen(4);
    for (int i = 0; i < 5; ++i) {
        std::string body;
        for (int t = 0; t < 80; ++t) body += csv::format_double(gen.next_gaussian()) + "\n";
        write_file(data / ("s" + std::to_string(i) + ".csv"), body);
        labels += "s" + std::to_string(i) + ",only\n";
    }
    write_file(data / "labels.csv", labels);

    ProjectConfig config;
    config.input = data.string();
    config.output_dir = (tmp.path / "out").string();
    config.k_folds = 2;
    std::ostringstream sink;
    REQUIRE(run_compute(config, sink) == 0);
    CHECK(run_analyze(config, sink) == 2);
    CHECK(fs::exists(tmp.path / "out" / "pca_scores.csv"));
    CHECK(!fs::exists(tmp.path / "out" / "ranking.json"));
    CHECK(!fs::exists(tmp.path / "out" / "classification.json"));
    const std::string manifest = slurp(tmp.path / "out" / "manifest.json");
    CHECK(manifest.find("MISSING_CLASS") != std::string::npos);

    // report needs a ranking; without one it fails fast with a hint
    std::ostringstream report_sink;
    CHECK_THROWS_AS(run_report(config, report_sink), IoError);
}

TEST_CASE("analyze without compute outputs fails with a remediation hint") {
    TempDir tmp;
    ProjectConfig config;
    config.output_dir = (tmp.path / "nothing_here").string();
    std::ostringstream sink;
    CHECK_THROWS_AS(run_analyze(config, sink), IoError);
    try {
        run_analyze(config, sink);
    } catch (const IoError& err) {
        CHECK(std::string(err.what()).find("compute") != std::string::npos);
    }
}
