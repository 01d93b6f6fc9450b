#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gnb/table.hpp"
#include "helpers.hpp"

using namespace gnb;

TEST_CASE("parse_csv handles quoting, line endings and blank lines") {
    std::string path = th::write_temp_file("quoting.csv",
        "a,b,c\r\n"
        "1, x ,\"he,llo\"\r\n"
        "\n"
        "2,\"with \"\"quotes\"\"\",\"two\nlines\"\n");
    CsvData csv = parse_csv(path);
    REQUIRE(csv.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(csv.rows.size() == 2);
    CHECK(csv.rows[0][1] == "x");            // unquoted fields are trimmed
    CHECK(csv.rows[0][2] == "he,llo");
    CHECK(csv.rows[1][1] == "with \"quotes\"");
    CHECK(csv.rows[1][2] == "two\nlines");
}

TEST_CASE("parse_csv rejects malformed input") {
    CHECK_THROWS_AS(parse_csv(th::write_temp_file("ragged.csv", "a,b\n1,2,3\n")), data_error);
    CHECK_THROWS_AS(parse_csv(th::write_temp_file("dup.csv", "a,a\n1,2\n")), data_error);
    CHECK_THROWS_AS(parse_csv(th::write_temp_file("noname.csv", "a,\n1,2\n")), data_error);
    CHECK_THROWS_AS(parse_csv(th::write_temp_file("unterminated.csv", "a,b\n\"x,2\n")), data_error);
    CHECK_THROWS_AS(parse_csv("/nonexistent/nowhere.csv"), data_error);
    CHECK_THROWS_AS(parse_csv(th::write_temp_file("empty.csv", "")), data_error);
}

TEST_CASE("load_csv drops incomplete rows and types columns") {
    std::string path = th::write_temp_file("load.csv",
        "num,cat,y\n"
        "1.5,a,pos\n"
        "?,b,neg\n"
        "2.5,NA,neg\n"
        "3e1,a,pos\n"
        "4,,neg\n"
        "0.25,c,neg\n");
    RawTable t = load_csv(path, "y");
    REQUIRE(t.n_rows == 3);
    CHECK(t.dropped_rows == 3);   // "?", "NA" and the empty cell each kill a row
    REQUIRE(t.columns[0].numeric);
    CHECK(t.columns[0].values == std::vector<double>{1.5, 30.0, 0.25});
    REQUIRE_FALSE(t.columns[1].numeric);
    CHECK(t.columns[1].labels == std::vector<std::string>{"a", "a", "c"});
    CHECK(t.class_column == "y");

    // a single non-numeric cell makes the whole column categorical
    std::string path2 = th::write_temp_file("load2.csv", "x,y\n1,a\noops,b\n2,a\n");
    RawTable t2 = load_csv(path2, "y");
    CHECK_FALSE(t2.columns[0].numeric);
}

TEST_CASE("load_csv validates the class column and non-empty result") {
    std::string path = th::write_temp_file("load3.csv", "x,y\n1,a\n");
    CHECK_THROWS_AS(load_csv(path, "nope"), data_error);
    std::string path2 = th::write_temp_file("load4.csv", "x,y\n?,a\n");
    CHECK_THROWS_AS(load_csv(path2, "y"), data_error);
}

TEST_CASE("custom missing markers") {
    std::string path = th::write_temp_file("load5.csv", "x,y\n1,a\n-999,b\n2,a\n");
    std::set<std::string> markers = default_missing_markers();
    markers.insert("-999");
    RawTable t = load_csv(path, "y", markers);
    CHECK(t.n_rows == 2);
    CHECK(t.dropped_rows == 1);
}

TEST_CASE("quantile bins on 1..10") {
    RawTable t;
    t.column_names = {"x", "y"};
    t.class_column = "y";
    RawColumn x;
    x.numeric = true;
    x.values = {10, 3, 1, 7, 5, 2, 9, 4, 6, 8};
    RawColumn y;
    y.numeric = false;
    y.labels = std::vector<std::string>(10, "a");
    y.labels[0] = "b";
    t.columns = {x, y};
    t.n_rows = 10;

    DiscretizationSpec spec = fit_discretization(t);
    REQUIRE(spec.columns[0].binned);
    CHECK(spec.columns[0].bins.boundaries == std::vector<double>{2, 4, 6, 8});
    CHECK(spec.columns[0].bins.representatives == std::vector<double>{1, 2.5, 4.5, 6.5, 9});
    CHECK(spec.columns[0].bins.min == 1);
    CHECK(spec.columns[0].bins.max == 10);
    CHECK(spec.columns[0].cardinality() == 5);

    ApplyResult res = apply_discretization(t, spec, "y");
    CHECK(res.range_warnings == 0);
    CHECK(res.table.codes[0] == std::vector<int>{4, 1, 0, 3, 2, 1, 4, 2, 3, 4});
    CHECK(res.table.class_column == 1);
    CHECK(res.table.cardinalities[1] == 2);
    CHECK(res.table.code_labels[1] == std::vector<std::string>{"b", "a"});
}

TEST_CASE("boundaries collapsing onto min or max are dropped") {
    // heavy mass at both ends; distinct values > 5 so the column is binned
    std::vector<double> vals;
    for (int i = 0; i < 40; ++i) vals.push_back(0);
    vals.insert(vals.end(), {1, 2, 3, 4, 5});
    for (int i = 0; i < 55; ++i) vals.push_back(9);
    RawTable t;
    t.column_names = {"x"};
    RawColumn x;
    x.numeric = true;
    x.values = vals;
    t.columns = {x};
    t.n_rows = vals.size();

    DiscretizationSpec spec = fit_discretization(t);
    REQUIRE(spec.columns[0].binned);
    // ranks 20/40/60/80 pick 0,0,9,9; min- and max-valued boundaries vanish
    CHECK(spec.columns[0].bins.boundaries.empty());
    REQUIRE(spec.columns[0].bins.representatives.size() == 1);
    CHECK_THAT(spec.columns[0].bins.representatives[0],
               Catch::Matchers::WithinAbs((40 * 0 + 1 + 2 + 3 + 4 + 5 + 55 * 9) / 100.0, 1e-12));
}

TEST_CASE("five or fewer distinct values pass through by first appearance") {
    RawTable t;
    t.column_names = {"x", "cat"};
    RawColumn x;
    x.numeric = true;
    x.values = {7, 3, 7, 1, 3, 7};
    RawColumn c;
    c.numeric = false;
    c.labels = {"red", "blue", "red", "green", "blue", "red"};
    t.columns = {x, c};
    t.n_rows = 6;

    DiscretizationSpec spec = fit_discretization(t);
    REQUIRE_FALSE(spec.columns[0].binned);
    CHECK(spec.columns[0].values == std::vector<double>{7, 3, 1});
    CHECK(spec.columns[1].labels == std::vector<std::string>{"red", "blue", "green"});

    ApplyResult res = apply_discretization(t, spec, "");
    CHECK(res.table.codes[0] == std::vector<int>{0, 1, 0, 2, 1, 0});
    CHECK(res.table.codes[1] == std::vector<int>{0, 1, 0, 2, 1, 0});
    CHECK(res.table.class_column == -1);
}

TEST_CASE("the class column is never binned") {
    RawTable t;
    t.column_names = {"x", "y"};
    t.class_column = "y";
    RawColumn x, y;
    x.numeric = true;
    y.numeric = true;
    for (int i = 0; i < 12; ++i) {
        x.values.push_back(i);
        y.values.push_back(i % 7);   // 7 distinct values, but it is the class
    }
    t.columns = {x, y};
    t.n_rows = 12;
    DiscretizationSpec spec = fit_discretization(t);
    CHECK(spec.columns[0].binned);
    CHECK_FALSE(spec.columns[1].binned);
    CHECK(spec.columns[1].values.size() == 7);
}

TEST_CASE("range warnings and clamping outside the fitted range") {
    RawTable fit_t;
    fit_t.column_names = {"x"};
    RawColumn x;
    x.numeric = true;
    x.values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    fit_t.columns = {x};
    fit_t.n_rows = 10;
    DiscretizationSpec spec = fit_discretization(fit_t);

    RawTable apply_t = fit_t;
    apply_t.columns[0].values = {0.0, 11.0, 5.0};
    apply_t.n_rows = 3;
    ApplyResult res = apply_discretization(apply_t, spec, "");
    CHECK(res.range_warnings == 2);
    CHECK(res.table.codes[0] == std::vector<int>{0, 4, 2});
}

TEST_CASE("unseen pass-through values map to code -1") {
    RawTable fit_t;
    fit_t.column_names = {"c"};
    RawColumn c;
    c.numeric = false;
    c.labels = {"a", "b", "a"};
    fit_t.columns = {c};
    fit_t.n_rows = 3;
    DiscretizationSpec spec = fit_discretization(fit_t);

    RawTable apply_t = fit_t;
    apply_t.columns[0].labels = {"b", "zzz"};
    apply_t.n_rows = 2;
    ApplyResult res = apply_discretization(apply_t, spec, "");
    CHECK(res.unseen_values == 1);
    CHECK(res.table.codes[0] == std::vector<int>{1, -1});
}

TEST_CASE("discretizing an already-discretized column changes nothing") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        RawTable t;
        t.column_names = {"x"};
        RawColumn x;
        x.numeric = true;
        size_t n = 20 + rng() % 100;
        for (size_t i = 0; i < n; ++i)
            x.values.push_back(std::round((double)(rng() % 1000)) / 10.0);
        t.columns = {x};
        t.n_rows = n;

        DiscretizationSpec spec = fit_discretization(t);
        ApplyResult first = apply_discretization(t, spec, "");

        // decode codes back to representatives and re-discretize
        RawTable t2 = t;
        const ColumnRule& rule = spec.columns[0];
        for (size_t i = 0; i < n; ++i) {
            int code = first.table.codes[0][i];
            t2.columns[0].values[i] =
                rule.binned ? rule.bins.representatives[code] : rule.values[code];
        }
        DiscretizationSpec spec2 = fit_discretization(t2);
        ApplyResult second = apply_discretization(t2, spec2, "");
        REQUIRE_FALSE(spec2.columns[0].binned);   // at most 5 representatives remain
        for (size_t i = 0; i < n; ++i) {
            double v1 = rule.binned ? rule.bins.representatives[first.table.codes[0][i]]
                                    : rule.values[first.table.codes[0][i]];
            double v2 = spec2.columns[0].values[second.table.codes[0][i]];
            CHECK(v1 == v2);
        }
    }
}

TEST_CASE("quantile recipe agrees with a direct recount on random columns") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 25; ++trial) {
        size_t n = 6 + rng() % 200;
        std::vector<double> vals(n);
        for (auto& v : vals) v = static_cast<double>(rng() % 40) / 4.0;   // plenty of ties
        std::set<double> distinct(vals.begin(), vals.end());
        if (distinct.size() <= 5) {
            --trial;
            continue;
        }

        RawTable t;
        t.column_names = {"x"};
        RawColumn x;
        x.numeric = true;
        x.values = vals;
        t.columns = {x};
        t.n_rows = n;
        DiscretizationSpec spec = fit_discretization(t);
        REQUIRE(spec.columns[0].binned);
        const BinRule& rule = spec.columns[0].bins;

        // independent recount
        std::vector<double> sorted = vals;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> expect;
        for (size_t j = 1; j <= 4; ++j) {
            size_t rank = std::max<size_t>(1, n * j / 5);
            double q = sorted[rank - 1];
            if (q == sorted.front() || q == sorted.back()) continue;
            if (!expect.empty() && expect.back() == q) continue;
            expect.push_back(q);
        }
        REQUIRE(rule.boundaries == expect);

        // codes count boundaries <= x; representatives are in-interval means
        std::vector<double> sum(expect.size() + 1, 0);
        std::vector<size_t> cnt(expect.size() + 1, 0);
        for (double v : vals) {
            size_t code = 0;
            for (double b : expect)
                if (v >= b) ++code;
            CHECK(discretize_value(rule, v) == static_cast<int>(code));
            sum[code] += v;
            cnt[code]++;
        }
        for (size_t k = 0; k < cnt.size(); ++k) {
            REQUIRE(cnt[k] > 0);
            CHECK_THAT(rule.representatives[k], Catch::Matchers::WithinAbs(sum[k] / cnt[k], 1e-9));
        }
    }
}

TEST_CASE("split sizes, determinism and disjointness") {
    std::mt19937 rng(5);
    gnb::DiscreteTable t = th::random_table(rng, 100, {3, 2, 4}, 1);
    Split s = split(t, 0.15, 42);
    CHECK(s.test.n_rows == 15);
    CHECK(s.train.n_rows == 85);
    CHECK(std::is_sorted(s.test_rows.begin(), s.test_rows.end()));

    Split s2 = split(t, 0.15, 42);
    CHECK(s.test_rows == s2.test_rows);
    Split s3 = split(t, 0.15, 43);
    CHECK(s.test_rows != s3.test_rows);

    // disjoint union: every row lands exactly once, with its codes intact
    std::set<size_t> test_set(s.test_rows.begin(), s.test_rows.end());
    size_t ti = 0, ri = 0;
    for (size_t r = 0; r < t.n_rows; ++r) {
        if (test_set.count(r)) {
            for (size_t c = 0; c < t.codes.size(); ++c)
                REQUIRE(s.test.codes[c][ti] == t.codes[c][r]);
            ++ti;
        } else {
            for (size_t c = 0; c < t.codes.size(); ++c)
                REQUIRE(s.train.codes[c][ri] == t.codes[c][r]);
            ++ri;
        }
    }
}

TEST_CASE("split sizes round half away from zero") {
    std::mt19937 rng(6);
    gnb::DiscreteTable t = th::random_table(rng, 10, {2, 2}, 0);
    CHECK(split(t, 0.15, 1).test.n_rows == 2);   // 1.5 rounds up
    CHECK(split(t, 0.24, 1).test.n_rows == 2);
}

TEST_CASE("split rejects degenerate fractions") {
    std::mt19937 rng(7);
    gnb::DiscreteTable t = th::random_table(rng, 10, {2, 2}, 0);
    CHECK_THROWS_AS(split(t, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(t, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(t, 0.01, 1), std::invalid_argument);   // test side empty
    CHECK_THROWS_AS(split(t, 0.99, 1), std::invalid_argument);   // train side empty
}

TEST_CASE("join_class_values rewrites numeric and categorical classes") {
    RawTable t;
    t.column_names = {"x", "y"};
    t.class_column = "y";
    RawColumn x, y;
    x.numeric = true;
    x.values = {1, 2, 3, 4, 5};
    y.numeric = true;
    y.values = {0, 1, 2, 3, 1};
    t.columns = {x, y};
    t.n_rows = 5;
    join_class_values(t, {{{"1", "2", "3"}, "1"}});
    CHECK(t.columns[1].values == std::vector<double>{0, 1, 1, 1, 1});

    RawTable c;
    c.column_names = {"y"};
    c.class_column = "y";
    RawColumn yc;
    yc.numeric = false;
    yc.labels = {"a", "b", "c"};
    c.columns = {yc};
    c.n_rows = 3;
    join_class_values(c, {{{"b", "c"}, "bc"}});
    CHECK(c.columns[0].labels == std::vector<std::string>{"a", "bc", "bc"});
}

TEST_CASE("drop_columns removes attributes but protects the class") {
    RawTable t;
    t.column_names = {"a", "b", "y"};
    t.class_column = "y";
    RawColumn col;
    col.numeric = true;
    col.values = {1, 2};
    t.columns = {col, col, col};
    t.n_rows = 2;
    RawTable r = drop_columns(t, {"a"});
    CHECK(r.column_names == std::vector<std::string>{"b", "y"});
    CHECK_THROWS_AS(drop_columns(t, {"y"}), data_error);
    CHECK_THROWS_AS(drop_columns(t, {"zzz"}), data_error);
}

TEST_CASE("class column must keep at least two values") {
    RawTable t;
    t.column_names = {"x", "y"};
    t.class_column = "y";
    RawColumn x, y;
    x.numeric = true;
    x.values = {1, 2, 3};
    y.numeric = false;
    y.labels = {"a", "a", "a"};
    t.columns = {x, y};
    t.n_rows = 3;
    DiscretizationSpec spec = fit_discretization(t);
    CHECK_THROWS_AS(apply_discretization(t, spec, "y"), data_error);
}
