#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "bivar/io.hpp"

using namespace bivar;

namespace {

std::vector<double> awkward_values(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = std::ldexp(u - 0.5, static_cast<int>(rng() % 40) - 20);  // spread exponents
    }
    v[0] = 0.1;           // classic non-representable decimals
    if (n > 1) v[1] = 1.0 / 3.0;
    if (n > 2) v[2] = 0.0;
    return v;
}

}  // namespace

TEST_CASE("format_double emits the shortest exact representation") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(0.1) == "0.1");  // shortest form that parses back exactly

    for (double v : awkward_values(200, 11)) {
        CAPTURE(v);
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    double third = 1.0 / 3.0;
    CHECK(std::strtod(format_double(third).c_str(), nullptr) == third);
    CHECK(std::strtod(format_double(1e300).c_str(), nullptr) == 1e300);
}

TEST_CASE("CsvTable renders rectangular tables and rejects ragged rows") {
    CsvTable t;
    t.header = {"a", "b"};
    t.add_row({"1", "2"});
    t.add_row({"3", "x"});
    CHECK(t.render() == "a,b\n1,2\n3,x\n");
    CHECK_THROWS_AS(t.add_row({"only-one"}), std::invalid_argument);
}

TEST_CASE("parse_csv round-trips and reports malformed lines by number") {
    auto t = parse_csv("a,b\n1,2\n3,4\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1] == "4");

    // windows line endings and missing trailing newline both parse
    auto t2 = parse_csv("a,b\r\n1,2\r\n3,4");
    CHECK(t2.rows.size() == 2);
    CHECK(t2.rows[1][0] == "3");

    try {
        parse_csv("a,b\n1,2\n1,2,3\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("expected 2 fields, got 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_csv("a,b\n\n1,2\n"), parse_error);
    CHECK_THROWS_AS(parse_csv(""), parse_error);
}

TEST_CASE("1D samples: exact text, exact round-trip, line-numbered failures") {
    SampledFunction1D f({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0});
    CHECK(write_function_1d(f) == "x,value\n0,1\n0.5,2\n1,3\n");

    std::vector<double> xs(40), vs = awkward_values(40, 5);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) / 7.0;
    SampledFunction1D g(xs, vs);
    auto back = read_function_1d(write_function_1d(g));
    CHECK(back.x == g.x);
    CHECK(back.v == g.v);

    CHECK_THROWS_AS(read_function_1d("t,value\n0,1\n1,2\n"), parse_error);
    try {
        read_function_1d("x,value\n0,1\n0.5,oops\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }
    // grid violations surface from the sample type, not the parser
    CHECK_THROWS_AS(read_function_1d("x,value\n1,1\n0,2\n"), hypothesis_error);
}

TEST_CASE("2D samples: corner literal, grid placement, exact round-trip") {
    SampledFunction2D F({0.0, 1.0}, {0.0, 1.0}, {1.0, 2.0, 3.0, 4.0});
    CHECK(write_function_2d(F) == "x\\y,0,1\n0,1,2\n1,3,4\n");

    std::vector<double> xs(5), ys(4);
    for (std::size_t i = 0; i < 5; ++i) xs[i] = 0.3 * static_cast<double>(i) + 0.1;
    for (std::size_t j = 0; j < 4; ++j) ys[j] = std::sqrt(static_cast<double>(j) + 0.5);
    SampledFunction2D G(xs, ys, awkward_values(20, 9));
    auto back = read_function_2d(write_function_2d(G));
    CHECK(back.gx == G.gx);
    CHECK(back.gy == G.gy);
    CHECK(back.v == G.v);

    CHECK_THROWS_AS(read_function_2d("y\\x,0,1\n0,1,2\n"), parse_error);
    CHECK_THROWS_AS(read_function_2d("x\\y\n0\n"), parse_error);
    try {
        read_function_2d("x\\y,0,1\n0,1,2\n1,3\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
    }
    try {
        read_function_2d("x\\y,0,1\n0,1,2\n1,3,nope\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("partition JSON round-trip and validation") {
    TaggedPartition part({0.0, 0.25, 1.0}, {0.125, 0.5});
    auto text = partition_to_json(part);
    auto back = partition_from_json(text);
    CHECK(back.points == part.points);
    CHECK(back.tags == part.tags);

    auto lit = partition_from_json(R"({"points":[0.0,1.0],"tags":[0.5]})");
    CHECK(lit.points == std::vector<double>{0.0, 1.0});
    CHECK(lit.tags == std::vector<double>{0.5});

    CHECK_THROWS_AS(partition_from_json(R"({"points":[0.0,1.0]})"), parse_error);
    CHECK_THROWS_AS(partition_from_json("{not json"), parse_error);
    // tag outside its cell is a domain violation, raised by the type itself
    CHECK_THROWS_AS(partition_from_json(R"({"points":[0.0,1.0],"tags":[2.0]})"),
                    hypothesis_error);
}

TEST_CASE("chain JSON keeps every level bitwise") {
    TaggedPartition target({0.0, 0.3, 1.0}, {0.1, 0.9});
    auto chain = build_chain(target, 0.0, 1.0);
    auto back = chain_from_json(chain_to_json(chain));
    CHECK(back.levels == chain.levels);

    auto lit = chain_from_json(R"({"levels":[[0.0,1.0],[0.0,0.5,1.0]]})");
    CHECK(lit.levels.size() == 2);
    CHECK(lit.target == lit.levels.back());

    CHECK_THROWS_AS(chain_from_json(R"({"levels":[]})"), parse_error);
    CHECK_THROWS_AS(chain_from_json(R"({"levels":[[0.0,1.0],[0.0,0.5,2.0]]})"), parse_error);
    CHECK_THROWS_AS(chain_from_json(R"({"levels":[[1.0,0.0]]})"), hypothesis_error);
}

TEST_CASE("bound report JSON carries every field under its stable name") {
    BoundReport rep;
    rep.lhs = 0.125;
    rep.integral_value = 1.5;
    rep.corner_term = 1.375;
    rep.integral_converged = true;
    rep.depth = 7;
    rep.p = 1.0;
    rep.q = 2.0;
    rep.norm_1p = 3.0;
    rep.norm_2q = 4.0;
    rep.main_rhs_general = 10.0;
    rep.truncation_error = 0.25;
    rep.main_rhs_general_literal = 11.0;
    rep.truncation_error_literal = 0.5;
    rep.main_rhs_powerlaw = 9.0;
    rep.Kc = 100.0;
    rep.K1c = 101.0;
    rep.K2c = 102.0;
    rep.holder_ratio = 0.75;
    rep.min_rhs = 9.0;
    rep.tightest = "main_powerlaw";
    rep.satisfied = true;

    auto j = nlohmann::json::parse(bound_report_to_json(rep));
    CHECK(j["lhs"].get<double>() == 0.125);
    CHECK(j["integral_value"].get<double>() == 1.5);
    CHECK(j["corner_term"].get<double>() == 1.375);
    CHECK(j["integral_converged"].get<bool>());
    CHECK(j["depth"].get<std::size_t>() == 7);
    CHECK(j["p"].get<double>() == 1.0);
    CHECK(j["q"].get<double>() == 2.0);
    CHECK(j["norm_1p"].get<double>() == 3.0);
    CHECK(j["norm_2q"].get<double>() == 4.0);
    CHECK(j["main_rhs_general"].get<double>() == 10.0);
    CHECK(j["truncation_error"].get<double>() == 0.25);
    CHECK(j["main_rhs_general_literal"].get<double>() == 11.0);
    CHECK(j["truncation_error_literal"].get<double>() == 0.5);
    CHECK(j["main_rhs_powerlaw"].get<double>() == 9.0);
    CHECK(j["K"].get<double>() == 16.0);
    CHECK(j["K1"].get<double>() == 16.0);
    CHECK(j["K2"].get<double>() == 16.0);
    CHECK(j["Kc"].get<double>() == 100.0);
    CHECK(j["K1c"].get<double>() == 101.0);
    CHECK(j["K2c"].get<double>() == 102.0);
    CHECK(j["holder_ratio"].get<double>() == 0.75);
    CHECK(j["min_rhs"].get<double>() == 9.0);
    CHECK(j["tightest"].get<std::string>() == "main_powerlaw");
    CHECK(j["satisfied"].get<bool>());
    CHECK_FALSE(j.contains("towghi_lhs"));
    CHECK_FALSE(j.contains("towghi_rhs"));
    CHECK_FALSE(j.contains("towghi_satisfied"));

    rep.towghi_lhs = 1.5;
    rep.towghi_rhs = 20.0;
    rep.towghi_satisfied = true;
    auto j2 = nlohmann::json::parse(bound_report_to_json(rep));
    CHECK(j2["towghi_lhs"].get<double>() == 1.5);
    CHECK(j2["towghi_rhs"].get<double>() == 20.0);
    CHECK(j2["towghi_satisfied"].get<bool>());
}

TEST_CASE("sweep table: one attributable row per case, flagged rows keep data") {
    auto rows = run_sweep(4, 99, 5e-4, 8, 2);
    auto kept = sweep_table(rows);
    CHECK(kept.header[0] == "case_id");
    CHECK(kept.header[9] == "lhs");
    CHECK(kept.header[10] == "main_rhs");
    CHECK(kept.header[16] == "towghi_rhs");
    CHECK(kept.header[18] == "satisfied");
    CHECK(kept.header[19] == "excluded");
    REQUIRE(kept.rows.size() == 4);
    for (const auto& r : kept.rows) {
        CHECK(r[18] == "1");
        CHECK(r[19] == "0");
        CHECK(r[20].empty());
    }
    // family-2 rows (id % 4 == 2) carry the joint-variation columns
    CHECK_FALSE(kept.rows[2][16].empty());
    CHECK(kept.rows[2][17] == "1");
    CHECK(kept.rows[0][16].empty());

    // a re-parse sees the identical table (round-trip invariant)
    auto echo = parse_csv(kept.render());
    CHECK(echo.header == kept.header);
    CHECK(echo.rows == kept.rows);

    // flagged rows: metadata + note survive, value columns stay empty
    auto bad = evaluate_case(make_sweep_case(0, 99), 5e-4, 8, 1e-3);
    auto flagged = sweep_table({bad});
    REQUIRE(flagged.rows.size() == 1);
    CHECK(flagged.rows[0][19] == "1");
    CHECK(flagged.rows[0][9].empty());
    CHECK_FALSE(flagged.rows[0][20].empty());
    CHECK(flagged.rows[0][20].find(',') == std::string::npos);
    CHECK_NOTHROW(parse_csv(flagged.render()));
}

TEST_CASE("experiment and moment tables use the pinned column names") {
    ExperimentRow e;
    e.k = 3;
    e.n_paths = 10;
    e.mean_sup_error = 0.5;
    e.se_sup_error = 0.125;
    e.mean_integral_l1_error = 0.25;
    e.se_integral_l1_error = 0.0625;
    e.stopped_fraction = 0.1;
    auto t = experiment_table({e});
    CHECK(t.render() ==
          "k,n_paths,mean_sup_error,se_sup_error,mean_integral_L1_error,se_integral_L1_error,"
          "stopped_fraction\n3,10,0.5,0.125,0.25,0.0625,0.1\n");

    MomentRow m;
    m.k = 4;
    m.n_paths = 7;
    m.mean_time_var = 2.0;
    m.se_time_var = 0.5;
    m.mean_space_var_pow = 3.0;
    m.se_space_var_pow = 0.75;
    auto mt = moment_table({m});
    CHECK(mt.render() ==
          "k,n_paths,mean_time_var,se_time_var,mean_space_var_pow,se_space_var_pow\n"
          "4,7,2,0.5,3,0.75\n");
}

TEST_CASE("text file round-trip and open failures") {
    std::string path = "/tmp/bivar_io_test.csv";
    write_text_file(path, "x,value\n0,1\n1,2\n");
    CHECK(read_text_file(path) == "x,value\n0,1\n1,2\n");
    auto f = read_function_1d(read_text_file(path));
    CHECK(f.v == std::vector<double>{1.0, 2.0});
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("/tmp/definitely_missing_bivar_file.csv"), parse_error);
}
