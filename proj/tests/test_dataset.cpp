#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "pcn/dataset.hpp"
#include "pcn/errors.hpp"

namespace {

namespace fs = std::filesystem;

fs::path fixture_dir() {
    const fs::path dir = fs::temp_directory_path() / "pcn_unit_fixtures";
    fs::create_directories(dir);
    return dir;
}

fs::path write_fixture(const std::string& name, const std::string& body) {
    const fs::path path = fixture_dir() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace

TEST_CASE("load_csv reads a labeled table") {
    const auto path = write_fixture("basic.csv",
                                    "x,y,class\n"
                                    "1.0,2.0,a\n"
                                    "3.5,-1.0,b\n"
                                    "2.0,0.0,a\n");
    pcn::CsvOptions opts;
    opts.label_column = "class";
    const pcn::RawTable table = pcn::load_csv(path.string(), opts);

    REQUIRE(table.values.rows() == 3);
    REQUIRE(table.values.cols() == 2);
    CHECK(table.column_names == std::vector<std::string>{"x", "y"});
    CHECK(table.values(0, 0) == 1.0);
    CHECK(table.values(1, 1) == -1.0);
    REQUIRE(table.has_labels());
    CHECK(table.labels == std::vector<std::string>{"a", "b", "a"});
    CHECK(table.label_source == "class");
}

TEST_CASE("load_csv without a label column keeps every column numeric") {
    const auto path = write_fixture("unlabeled.csv", "x,y\n1,2\n3,4\n");
    const pcn::RawTable table = pcn::load_csv(path.string(), {});
    CHECK(table.values.cols() == 2);
    CHECK_FALSE(table.has_labels());
}

TEST_CASE("load_csv error contracts") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS(pcn::load_csv((fixture_dir() / "nope.csv").string(), {}), pcn::IoError);
    }
    SUBCASE("ragged row names the file line") {
        const auto path = write_fixture("ragged.csv", "x,y\n1,2\n3\n");
        CHECK_THROWS_WITH_AS(pcn::load_csv(path.string(), {}),
                             doctest::Contains("row 3"), pcn::ParseError);
    }
    SUBCASE("absent label column") {
        const auto path = write_fixture("nolabel.csv", "x,y\n1,2\n");
        pcn::CsvOptions opts;
        opts.label_column = "class";
        CHECK_THROWS_AS(pcn::load_csv(path.string(), opts), pcn::InvalidArgument);
    }
    SUBCASE("non-numeric value names the cell") {
        const auto path = write_fixture("nonnum.csv", "x,y\n1,abc\n");
        CHECK_THROWS_WITH_AS(pcn::load_csv(path.string(), {}),
                             doctest::Contains("abc"), pcn::ParseError);
    }
    SUBCASE("missing value is rejected by default") {
        const auto path = write_fixture("missing.csv", "x,y\n1,?\n2,3\n");
        CHECK_THROWS_AS(pcn::load_csv(path.string(), {}), pcn::ParseError);
    }
    SUBCASE("header only") {
        const auto path = write_fixture("headeronly.csv", "x,y\n");
        CHECK_THROWS_AS(pcn::load_csv(path.string(), {}), pcn::ParseError);
    }
}

TEST_CASE("load_csv drops incomplete rows when asked") {
    const auto path = write_fixture("drop.csv",
                                    "x,y,class\n"
                                    "1,2,a\n"
                                    "?,3,b\n"
                                    "4,,a\n"
                                    "5,6,b\n");
    pcn::CsvOptions opts;
    opts.label_column = "class";
    opts.drop_incomplete_rows = true;
    const pcn::RawTable table = pcn::load_csv(path.string(), opts);
    REQUIRE(table.values.rows() == 2);
    CHECK(table.values(0, 0) == 1.0);
    CHECK(table.values(1, 1) == 6.0);
    CHECK(table.labels == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_csv one-hot expands categorical feature columns") {
    const auto path = write_fixture("cat.csv",
                                    "x,color,class\n"
                                    "1,red,a\n"
                                    "2,blue,b\n"
                                    "3,red,a\n"
                                    "4,green,b\n");
    pcn::CsvOptions opts;
    opts.label_column = "class";
    opts.one_hot = true;
    const pcn::RawTable table = pcn::load_csv(path.string(), opts);

    REQUIRE(table.values.cols() == 4);
    // categories sorted: blue, green, red
    CHECK(table.column_names ==
          std::vector<std::string>{"x", "color=blue", "color=green", "color=red"});
    CHECK(table.values(0, 3) == 1.0);
    CHECK(table.values(0, 1) == 0.0);
    CHECK(table.values(1, 1) == 1.0);
    CHECK(table.values(3, 2) == 1.0);
    CHECK(table.values.col(0).isApprox(Eigen::Vector4d(1, 2, 3, 4)));
}

TEST_CASE("iris file loads with 150 rows, 4 feature columns, 150 labels") {
    const char* env = std::getenv("PCN_DATA_DIR");
    const fs::path dir = env != nullptr ? fs::path(env) : fs::path("data");
    const fs::path path = dir / "iris.csv";
    REQUIRE_MESSAGE(fs::exists(path), "expected bundled file at ", path.string());

    pcn::CsvOptions opts;
    opts.label_column = "class";
    const pcn::RawTable table = pcn::load_csv(path.string(), opts);
    CHECK(table.values.rows() == 150);
    CHECK(table.values.cols() == 4);
    CHECK(table.labels.size() == 150);
    const std::set<std::string> classes(table.labels.begin(), table.labels.end());
    CHECK(classes.size() == 3);
}

TEST_CASE("standardize centers and scales columns to squared norm m") {
    pcn::RawTable table;
    table.values.resize(3, 1);
    table.values << 1.0, 2.0, 3.0;
    table.column_names = {"x"};

    const pcn::Dataset data = pcn::standardize(table, pcn::Orientation::SamplesAsRows);
    REQUIRE(data.m == 3);
    REQUIRE(data.n == 1);
    const double r = std::sqrt(1.5);
    CHECK(data.columns(0, 0) == doctest::Approx(-r).epsilon(1e-12));
    CHECK(data.columns(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(data.columns(2, 0) == doctest::Approx(r).epsilon(1e-12));
    CHECK(data.columns.col(0).squaredNorm() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("standardize zeroes constant columns and records them") {
    pcn::RawTable table;
    table.values.resize(4, 2);
    table.values << 1, 5, 2, 5, 3, 5, 4, 5;
    table.column_names = {"x", "c"};

    const pcn::Dataset data = pcn::standardize(table, pcn::Orientation::SamplesAsRows);
    CHECK(data.columns.col(1).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(data.degenerate.size() == 1);
    CHECK(data.degenerate[0] == 1);
    CHECK(data.columns.col(0).squaredNorm() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("standardize is idempotent") {
    pcn::RawTable table;
    table.values.resize(5, 3);
    table.values << 1, 10, 3, 2, 20, -1, 5, 15, 4, 7, 25, 0, 4, 30, 2;
    table.column_names = {"a", "b", "c"};

    const pcn::Dataset once = pcn::standardize(table, pcn::Orientation::SamplesAsRows);
    pcn::RawTable again;
    again.values = once.columns;
    again.column_names = table.column_names;
    const pcn::Dataset twice = pcn::standardize(again, pcn::Orientation::SamplesAsRows);
    CHECK((twice.columns - once.columns).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("standardized columns give a unit correlation diagonal") {
    pcn::RawTable table;
    table.values.resize(6, 3);
    table.values << 1, 2, 3, 4, 1, 2, 2, 8, 1, 5, 3, 9, 7, 2, 4, 3, 6, 5;
    table.column_names = {"a", "b", "c"};
    const pcn::Dataset data = pcn::standardize(table, pcn::Orientation::SamplesAsRows);

    const Eigen::MatrixXd corr =
        data.columns.transpose() * data.columns / static_cast<double>(data.m);
    for (Eigen::Index j = 0; j < corr.cols(); ++j)
        CHECK(corr(j, j) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("samples-as-columns orientation transposes and carries labels") {
    pcn::RawTable table;
    table.values.resize(2, 5); // 2 file rows -> 2 engine columns after transpose
    table.values << 1, 2, 3, 4, 5, 5, 4, 3, 2, 1;
    table.column_names = {"f1", "f2", "f3", "f4", "f5"};
    table.labels = {"a", "b"};
    table.label_source = "class";

    const pcn::Dataset data = pcn::standardize(table, pcn::Orientation::SamplesAsColumns);
    CHECK(data.m == 5);
    CHECK(data.n == 2);
    REQUIRE(data.has_labels());
    CHECK(data.labels == std::vector<std::string>{"a", "b"});

    // Row orientation keeps the file shape; labels no longer align with columns.
    const pcn::Dataset rows = pcn::standardize(table, pcn::Orientation::SamplesAsRows);
    CHECK(rows.m == 2);
    CHECK(rows.n == 5);
    CHECK_FALSE(rows.has_labels());
}

TEST_CASE("row pre-standardization matches the manual two-pass result") {
    pcn::RawTable table;
    table.values.resize(4, 3);
    table.values << 1, 200, 30, 2, 100, 60, 3, 400, 10, 4, 300, 80;
    table.column_names = {"a", "b", "c"};

    const pcn::Dataset got =
        pcn::standardize(table, pcn::Orientation::SamplesAsRows, true);

    // Oracle: standardize each row of the oriented matrix, then each column.
    Eigen::MatrixXd work = table.values;
    for (Eigen::Index i = 0; i < work.rows(); ++i) {
        const double mean = work.row(i).mean();
        work.row(i).array() -= mean;
        const double ss = work.row(i).squaredNorm();
        work.row(i) *= std::sqrt(static_cast<double>(work.cols()) / ss);
    }
    for (Eigen::Index j = 0; j < work.cols(); ++j) {
        const double mean = work.col(j).mean();
        work.col(j).array() -= mean;
        const double ss = work.col(j).squaredNorm();
        work.col(j) *= std::sqrt(static_cast<double>(work.rows()) / ss);
    }
    CHECK((got.columns - work).cwiseAbs().maxCoeff() < 1e-12);

    const pcn::Dataset plain = pcn::standardize(table, pcn::Orientation::SamplesAsRows);
    CHECK((plain.columns - got.columns).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("standardize rejects an empty table") {
    pcn::RawTable table;
    table.values.resize(0, 0);
    CHECK_THROWS_AS(pcn::standardize(table, pcn::Orientation::SamplesAsRows),
                    pcn::InvalidArgument);
}

TEST_CASE("split_folds distributes 150 samples into five folds of 30") {
    const pcn::FoldAssignment folds = pcn::split_folds(150, 5, 17);
    REQUIRE(folds.fold_of.size() == 150);
    std::vector<int> counts(5, 0);
    for (int f : folds.fold_of) {
        REQUIRE(f >= 0);
        REQUIRE(f < 5);
        ++counts[static_cast<std::size_t>(f)];
    }
    for (int c : counts) CHECK(c == 30);
}

TEST_CASE("split_folds sizes differ by at most one") {
    const pcn::FoldAssignment folds = pcn::split_folds(7, 3, 1);
    std::vector<int> counts(3, 0);
    for (int f : folds.fold_of) ++counts[static_cast<std::size_t>(f)];
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<int>{2, 2, 3});
}

TEST_CASE("split_folds is deterministic in the seed") {
    const pcn::FoldAssignment a = pcn::split_folds(100, 5, 17);
    const pcn::FoldAssignment b = pcn::split_folds(100, 5, 17);
    CHECK(a.fold_of == b.fold_of);
    const pcn::FoldAssignment c = pcn::split_folds(100, 5, 18);
    CHECK(a.fold_of != c.fold_of);
}

TEST_CASE("split_folds validates the fold count") {
    CHECK_THROWS_AS(pcn::split_folds(10, 1, 0), pcn::InvalidArgument);
    CHECK_THROWS_AS(pcn::split_folds(10, 11, 0), pcn::InvalidArgument);
    CHECK_NOTHROW(pcn::split_folds(10, 10, 0));
}
