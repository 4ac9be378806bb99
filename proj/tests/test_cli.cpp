#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "pcn/io.hpp"

namespace {

namespace fs = std::filesystem;

std::string g_cli;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "pcn_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    const fs::path dir = work_dir();
    const fs::path capture = dir / "_output.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + g_cli + "' " + args + " > '" +
                            capture.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = slurp(capture);
    return result;
}

// 12 samples, 4 numeric features, alternating labels. Samples of class x
// carry an up-down feature pattern, class y the reverse, so both sample-wise
// and feature-wise runs see real structure.
fs::path fixture_csv() {
    const fs::path path = work_dir() / "tiny.csv";
    std::ofstream out(path);
    out << "a,b,c,d,class\n";
    for (int s = 0; s < 12; ++s) {
        const bool up = s % 2 == 0;
        const double base = 1.0 + 0.1 * s;
        const double hi = base + 2.0;
        const double lo = base - 2.0;
        out << (up ? hi : lo) << ',' << (up ? lo : hi) << ',' << (up ? hi + 0.3 : lo - 0.1)
            << ',' << (up ? lo - 0.2 : hi + 0.2) << ',' << (up ? 'x' : 'y') << '\n';
    }
    return path;
}

int count_lines(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST_CASE("network subcommand writes a geometric edge list with a sidecar") {
    fixture_csv();
    const auto result = run_cli("network --input tiny.csv --label-column class "
                                "--ridge 1.0 --output net.csv --self-check");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("self-check passed") != std::string::npos);

    const fs::path out = work_dir() / "net.csv";
    REQUIRE(fs::exists(out));
    CHECK(count_lines(out) == 2 + 6); // provenance + header + C(4,2) edges

    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# generator=pcn/", 0) == 0);
    std::getline(in, line);
    CHECK(line == "i,j,weight");

    const fs::path meta = work_dir() / "net.csv.meta.json";
    REQUIRE(fs::exists(meta));
    const nlohmann::json j = nlohmann::json::parse(slurp(meta));
    CHECK(j["form"] == "geometric");
    CHECK(j["reg"] == "ridge:1");
    CHECK(j["rows"] == 12);
    CHECK(j["columns"] == 4);
    CHECK(j["provenance"]["generator"] == "pcn/1.0.0");
    CHECK(j.contains("resolution_diagonal"));
}

TEST_CASE("network reruns are byte-identical") {
    fixture_csv();
    REQUIRE(run_cli("network --input tiny.csv --label-column class --ridge 0.5 "
                    "--output rerun_a.csv").exit_code == 0);
    REQUIRE(run_cli("network --input tiny.csv --label-column class --ridge 0.5 "
                    "--output rerun_b.csv").exit_code == 0);
    CHECK(slurp(work_dir() / "rerun_a.csv") == slurp(work_dir() / "rerun_b.csv"));
    CHECK(slurp(work_dir() / "rerun_a.csv.meta.json") ==
          slurp(work_dir() / "rerun_b.csv.meta.json"));
}

TEST_CASE("network threshold filters edges") {
    fixture_csv();
    REQUIRE(run_cli("network --input tiny.csv --label-column class --ridge 1.0 "
                    "--threshold 1e9 --output thresh.csv").exit_code == 0);
    CHECK(count_lines(work_dir() / "thresh.csv") == 2); // provenance + header only
}

TEST_CASE("network dense and factored formats") {
    fixture_csv();
    REQUIRE(run_cli("network --input tiny.csv --label-column class --form asymmetric "
                    "--format dense-csv --output dense.csv").exit_code == 0);
    CHECK(count_lines(work_dir() / "dense.csv") == 1 + 4); // provenance + 4 rows

    REQUIRE(run_cli("network --input tiny.csv --label-column class --form asymmetric "
                    "--format factored-bin --output net.bin").exit_code == 0);
    const pcn::FactoredNetwork net =
        pcn::load_factored_network((work_dir() / "net.bin").string());
    CHECK(net.right_vectors.rows() == 4);
    CHECK(net.diag.size() == 4);
    CHECK(net.d.size() == 4);
}

TEST_CASE("embed subcommand emits embeddings and distance matrices") {
    fixture_csv();
    const auto emb = run_cli("embed --input tiny.csv --label-column class --svd-rank 2 "
                             "--self-check --output emb.csv");
    CHECK(emb.exit_code == 0);
    CHECK(emb.output.find("self-check passed") != std::string::npos);
    CHECK(count_lines(work_dir() / "emb.csv") == 1 + 4); // provenance + one row per node

    const auto dist = run_cli("embed --input tiny.csv --label-column class --metric pcn-exact "
                              "--ridge 1.0 --self-check --output dist.csv");
    CHECK(dist.exit_code == 0);
    CHECK(count_lines(work_dir() / "dist.csv") == 1 + 4); // 4x4 matrix

    const auto filt = run_cli("embed --input tiny.csv --label-column class --ridge 1.0 "
                              "--filtered-embedding --self-check --output femb.csv");
    CHECK(filt.exit_code == 0);
}

TEST_CASE("knn subcommand reports cross-validation results deterministically") {
    fixture_csv();
    const std::string args =
        "knn --input tiny.csv --label-column class --k-grid 1,3 "
        "--reg-grid ridge:0.1,ridge:1 --folds 3 --seed 17 --output rep";
    const auto first = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(first.output.find("best standard") != std::string::npos);

    const nlohmann::json j = nlohmann::json::parse(slurp(work_dir() / "rep.json"));
    CHECK(j["dataset"] == "tiny");
    CHECK(j["samples"] == 12);
    CHECK(j["features"] == 4);
    CHECK(j["k_folds"] == 3);
    CHECK(j["cells"].size() == 2 + 4);

    std::ifstream csv(work_dir() / "rep.csv");
    std::string line;
    std::getline(csv, line);
    std::getline(csv, line);
    CHECK(line == "dataset,samples,features,acc_knn,acc_kpcn");
    std::getline(csv, line);
    CHECK(line.rfind("tiny,12,4,", 0) == 0);

    const std::string json_once = slurp(work_dir() / "rep.json");
    const std::string csv_once = slurp(work_dir() / "rep.csv");
    REQUIRE(run_cli(args).exit_code == 0);
    CHECK(slurp(work_dir() / "rep.json") == json_once);
    CHECK(slurp(work_dir() / "rep.csv") == csv_once);
}

TEST_CASE("svd cache round-trips and feeds other subcommands") {
    fixture_csv();
    const auto cache = run_cli("svd-cache --input tiny.csv --label-column class "
                               "--check --output cache.bin");
    CHECK(cache.exit_code == 0);
    CHECK(cache.output.find("round-trip check passed") != std::string::npos);

    REQUIRE(run_cli("embed --input tiny.csv --label-column class --svd-rank 2 "
                    "--output emb_direct.csv").exit_code == 0);
    const auto reuse = run_cli("embed --input tiny.csv --label-column class --svd-rank 2 "
                               "--svd-cache cache.bin --output emb_cached.csv");
    CHECK(reuse.exit_code == 0);
    // Same factors, same payload; only the provenance line differs.
    const std::string direct = slurp(work_dir() / "emb_direct.csv");
    const std::string cached = slurp(work_dir() / "emb_cached.csv");
    REQUIRE(direct.find('\n') != std::string::npos);
    REQUIRE(cached.find('\n') != std::string::npos);
    CHECK(direct.substr(direct.find('\n')) == cached.substr(cached.find('\n')));
}

TEST_CASE("errors exit nonzero with a message") {
    fixture_csv();
    SUBCASE("missing input file") {
        const auto r = run_cli("network --input no_such_file.csv");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("error:") != std::string::npos);
    }
    SUBCASE("knn requires a label column") {
        const auto r = run_cli("knn --input tiny.csv");
        CHECK(r.exit_code != 0);
    }
    SUBCASE("regularizations are mutually exclusive") {
        const auto r = run_cli("network --input tiny.csv --ridge 1 --svd-rank 2");
        CHECK(r.exit_code != 0);
    }
    SUBCASE("orientation values are validated") {
        const auto r = run_cli("network --input tiny.csv --orientation diagonal");
        CHECK(r.exit_code != 0);
    }
    SUBCASE("absent label column is reported") {
        const auto r = run_cli("network --input tiny.csv --label-column missing_column");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("error:") != std::string::npos);
    }
    SUBCASE("bad reg-grid entries are reported") {
        const auto r = run_cli("knn --input tiny.csv --label-column class "
                               "--reg-grid ridge:abc");
        CHECK(r.exit_code == 1);
    }
}

int main(int argc, char** argv) {
    const char* env = std::getenv("PCN_CLI");
    if (env != nullptr) g_cli = env;
    if (g_cli.empty() || !fs::exists(g_cli)) {
        std::fprintf(stderr, "PCN_CLI does not point at the pcn binary\n");
        return 1;
    }
    fs::remove_all(work_dir());
    doctest::Context context;
    context.applyCommandLine(argc, argv);
    return context.run();
}
