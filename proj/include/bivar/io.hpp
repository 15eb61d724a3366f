#ifndef BIVAR_IO_HPP
#define BIVAR_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/localtime.hpp"
#include "bivar/partitions.hpp"
#include "bivar/sweep.hpp"
#include "bivar/young.hpp"

// CSV/JSON ingestion and emission. Numeric cells are written with 17
// significant digits so every emitted file re-ingests to bitwise-identical
// values; parse failures carry 1-based line numbers.

namespace bivar {

struct parse_error : std::runtime_error {
    std::size_t line;  // 1-based; 0 when no line applies
    parse_error(std::size_t line_no, const std::string& msg);
};

// shortest exact form up to 17 significant digits; strtod round-trips it
std::string format_double(double v);

// rectangular table of pre-rendered cells
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // throws std::invalid_argument on width mismatch
    void add_row(std::vector<std::string> row);
    std::string render() const;
};

CsvTable parse_csv(const std::string& text);

// 1D samples: header "x,value", one row per sample
std::string write_function_1d(const SampledFunction1D& f);
SampledFunction1D read_function_1d(const std::string& text);

// 2D samples: cell (1,1) is the literal x\y, first row the y grid, first
// column the x grid, body the value matrix (rows follow x)
std::string write_function_2d(const SampledFunction2D& F);
SampledFunction2D read_function_2d(const std::string& text);

// {"points":[...],"tags":[...]}
std::string partition_to_json(const TaggedPartition& part);
TaggedPartition partition_from_json(const std::string& text);

// {"levels":[[...],...]}  (target points are reconstructible from any level)
std::string chain_to_json(const RefinementChain& chain);
RefinementChain chain_from_json(const std::string& text);

// every numeric member under its field name; the joint-variation entries
// appear only when the report carries them
std::string bound_report_to_json(const BoundReport& rep);

// one row per case: id, family, grid, exponents, both sides, verdicts; the
// note column keeps rejection reasons next to their flagged rows
CsvTable sweep_table(const std::vector<SweepOutcome>& rows);

CsvTable experiment_table(const std::vector<ExperimentRow>& rows);
CsvTable moment_table(const std::vector<MomentRow>& rows);

std::string read_text_file(const std::string& path);   // parse_error on open failure
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bivar

#endif
