#include "bivar/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bivar {

namespace {

using ojson = nlohmann::ordered_json;

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

ojson parse_json(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(line_of_offset(text, e.byte), e.what());
    }
}

std::vector<double> number_array(const ojson& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw parse_error(0, std::string("missing array field \"") + key + "\"");
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& e : j[key]) {
        if (!e.is_number()) throw parse_error(0, std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(e.get<double>());
    }
    return out;
}

double parse_num(const std::string& cell, std::size_t line_no) {
    const char* s = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == s || (end && *end != '\0'))
        throw parse_error(line_no, "not a number: \"" + cell + "\"");
    return v;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

// fields may not contain commas; reasons coming from exceptions are
// sanitized before they land in a table
std::string sanitize_cell(std::string s) {
    for (auto& ch : s)
        if (ch == ',' || ch == '\n') ch = ';';
    return s;
}

}  // namespace

parse_error::parse_error(std::size_t line_no, const std::string& msg)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
      line(line_no) {}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;  // unreachable for finite v; %.17g round-trips doubles
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw std::invalid_argument("row width " + std::to_string(row.size()) +
                                    " does not match header width " +
                                    std::to_string(header.size()));
    rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << '\n';
    }
    return os.str();
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        if (pos == text.size()) break;
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (pos >= text.size()) break;  // trailing blank line
            throw parse_error(line_no, "empty line");
        }
        auto cells = split_cells(line);
        if (line_no == 1) {
            t.header = std::move(cells);
        } else if (cells.size() != t.header.size()) {
            throw parse_error(line_no, "expected " + std::to_string(t.header.size()) +
                                           " fields, got " + std::to_string(cells.size()));
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.header.empty()) throw parse_error(1, "missing header");
    return t;
}

std::string write_function_1d(const SampledFunction1D& f) {
    CsvTable t;
    t.header = {"x", "value"};
    for (std::size_t i = 0; i < f.size(); ++i)
        t.add_row({format_double(f.x[i]), format_double(f.v[i])});
    return t.render();
}

SampledFunction1D read_function_1d(const std::string& text) {
    auto t = parse_csv(text);
    if (t.header != std::vector<std::string>{"x", "value"})
        throw parse_error(1, "expected header \"x,value\"");
    std::vector<double> xs, vs;
    xs.reserve(t.rows.size());
    vs.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        xs.push_back(parse_num(t.rows[r][0], r + 2));
        vs.push_back(parse_num(t.rows[r][1], r + 2));
    }
    return SampledFunction1D(std::move(xs), std::move(vs));
}

std::string write_function_2d(const SampledFunction2D& F) {
    CsvTable t;
    t.header.reserve(F.ny() + 1);
    t.header.push_back("x\\y");
    for (std::size_t j = 0; j < F.ny(); ++j) t.header.push_back(format_double(F.gy[j]));
    for (std::size_t i = 0; i < F.nx(); ++i) {
        std::vector<std::string> row;
        row.reserve(F.ny() + 1);
        row.push_back(format_double(F.gx[i]));
        for (std::size_t j = 0; j < F.ny(); ++j) row.push_back(format_double(F.at(i, j)));
        t.add_row(std::move(row));
    }
    return t.render();
}

SampledFunction2D read_function_2d(const std::string& text) {
    auto t = parse_csv(text);
    if (t.header.empty() || t.header[0] != "x\\y")
        throw parse_error(1, "expected corner cell \"x\\y\" followed by the y grid");
    if (t.header.size() < 2) throw parse_error(1, "no y grid columns");
    std::vector<double> ys;
    ys.reserve(t.header.size() - 1);
    for (std::size_t j = 1; j < t.header.size(); ++j) ys.push_back(parse_num(t.header[j], 1));
    std::vector<double> xs, vals;
    xs.reserve(t.rows.size());
    vals.reserve(t.rows.size() * ys.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        xs.push_back(parse_num(t.rows[r][0], r + 2));
        for (std::size_t j = 1; j < t.rows[r].size(); ++j)
            vals.push_back(parse_num(t.rows[r][j], r + 2));
    }
    return SampledFunction2D(std::move(xs), std::move(ys), std::move(vals));
}

std::string partition_to_json(const TaggedPartition& part) {
    ojson j;
    j["points"] = part.points;
    j["tags"] = part.tags;
    return j.dump(2) + "\n";
}

TaggedPartition partition_from_json(const std::string& text) {
    ojson j = parse_json(text);
    return TaggedPartition(number_array(j, "points"), number_array(j, "tags"));
}

std::string chain_to_json(const RefinementChain& chain) {
    ojson j;
    j["levels"] = chain.levels;
    return j.dump(2) + "\n";
}

RefinementChain chain_from_json(const std::string& text) {
    ojson j = parse_json(text);
    if (!j.contains("levels") || !j["levels"].is_array() || j["levels"].empty())
        throw parse_error(0, "missing array field \"levels\"");
    RefinementChain chain;
    for (const auto& lvl : j["levels"]) {
        if (!lvl.is_array()) throw parse_error(0, "levels entries must be arrays");
        std::vector<double> pts;
        pts.reserve(lvl.size());
        for (const auto& e : lvl) {
            if (!e.is_number()) throw parse_error(0, "non-numeric entry in \"levels\"");
            pts.push_back(e.get<double>());
        }
        require_increasing(pts, "chain level");
        if (!chain.levels.empty() &&
            (pts.front() != chain.levels.front().front() || pts.back() != chain.levels.front().back()))
            throw parse_error(0, "chain levels must share endpoints");
        chain.levels.push_back(std::move(pts));
    }
    chain.target = chain.levels.back();  // the file format carries levels only
    return chain;
}

std::string bound_report_to_json(const BoundReport& rep) {
    ojson j;
    j["lhs"] = rep.lhs;
    j["integral_value"] = rep.integral_value;
    j["corner_term"] = rep.corner_term;
    j["integral_converged"] = rep.integral_converged;
    j["depth"] = rep.depth;
    j["p"] = rep.p;
    j["q"] = rep.q;
    j["norm_1p"] = rep.norm_1p;
    j["norm_2q"] = rep.norm_2q;
    j["main_rhs_general"] = rep.main_rhs_general;
    j["truncation_error"] = rep.truncation_error;
    j["main_rhs_general_literal"] = rep.main_rhs_general_literal;
    j["truncation_error_literal"] = rep.truncation_error_literal;
    j["main_rhs_powerlaw"] = rep.main_rhs_powerlaw;
    j["K"] = rep.K;
    j["K1"] = rep.K1;
    j["K2"] = rep.K2;
    j["Kc"] = rep.Kc;
    j["K1c"] = rep.K1c;
    j["K2c"] = rep.K2c;
    if (rep.towghi_lhs) j["towghi_lhs"] = *rep.towghi_lhs;
    if (rep.towghi_rhs) j["towghi_rhs"] = *rep.towghi_rhs;
    if (rep.towghi_satisfied) j["towghi_satisfied"] = *rep.towghi_satisfied;
    j["holder_ratio"] = rep.holder_ratio;
    j["min_rhs"] = rep.min_rhs;
    j["tightest"] = rep.tightest;
    j["satisfied"] = rep.satisfied;
    return j.dump(2) + "\n";
}

CsvTable sweep_table(const std::vector<SweepOutcome>& rows) {
    CsvTable t;
    t.header = {"case_id",  "family",   "nx",
                "ny",       "p",        "q",
                "p_tilde",  "q_tilde",  "alpha",
                "lhs",      "main_rhs", "main_rhs_literal",
                "main_rhs_powerlaw",    "min_rhs",
                "ratio",    "towghi_lhs",
                "towghi_rhs",           "towghi_satisfied",
                "satisfied", "excluded", "note"};
    for (const auto& o : rows) {
        std::vector<std::string> r;
        r.push_back(std::to_string(o.index));
        r.push_back(std::to_string(o.family));
        r.push_back(std::to_string(o.nx));
        r.push_back(std::to_string(o.ny));
        r.push_back(format_double(o.p));
        r.push_back(format_double(o.q));
        r.push_back(format_double(o.p_tilde));
        r.push_back(format_double(o.q_tilde));
        r.push_back(format_double(o.alpha));
        if (o.excluded) {
            for (int c = 0; c < 9; ++c) r.emplace_back();
            r.push_back("0");
            r.push_back("1");
            r.push_back(sanitize_cell(o.note));
        } else {
            const auto& rep = o.report;
            r.push_back(format_double(rep.lhs));
            r.push_back(format_double(rep.main_rhs_general + rep.truncation_error));
            r.push_back(format_double(rep.main_rhs_general_literal + rep.truncation_error_literal));
            r.push_back(format_double(rep.main_rhs_powerlaw));
            r.push_back(format_double(rep.min_rhs));
            r.push_back(format_double(o.ratio));
            r.push_back(rep.towghi_lhs ? format_double(*rep.towghi_lhs) : std::string());
            r.push_back(rep.towghi_rhs ? format_double(*rep.towghi_rhs) : std::string());
            r.push_back(rep.towghi_satisfied ? (*rep.towghi_satisfied ? "1" : "0") : std::string());
            r.push_back(o.satisfied ? "1" : "0");
            r.push_back("0");
            r.emplace_back();
        }
        t.add_row(std::move(r));
    }
    return t;
}

CsvTable experiment_table(const std::vector<ExperimentRow>& rows) {
    CsvTable t;
    t.header = {"k",
                "n_paths",
                "mean_sup_error",
                "se_sup_error",
                "mean_integral_L1_error",
                "se_integral_L1_error",
                "stopped_fraction"};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.k), std::to_string(r.n_paths),
                   format_double(r.mean_sup_error), format_double(r.se_sup_error),
                   format_double(r.mean_integral_l1_error), format_double(r.se_integral_l1_error),
                   format_double(r.stopped_fraction)});
    return t;
}

CsvTable moment_table(const std::vector<MomentRow>& rows) {
    CsvTable t;
    t.header = {"k",           "n_paths",        "mean_time_var",
                "se_time_var", "mean_space_var_pow", "se_space_var_pow"};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.k), std::to_string(r.n_paths), format_double(r.mean_time_var),
                   format_double(r.se_time_var), format_double(r.mean_space_var_pow),
                   format_double(r.se_space_var_pow)});
    return t;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error(0, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

}  // namespace bivar
