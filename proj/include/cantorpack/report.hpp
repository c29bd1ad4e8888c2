#pragma once

// Report assembly: JSON bodies, CSV mirrors of the tabular sections and the
// file layout written by the command-line front end.

#include "cantorpack/billingsley.hpp"
#include "cantorpack/config.hpp"
#include "cantorpack/faithfulness.hpp"
#include "cantorpack/packing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cantorpack {

struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    std::string command;
    Json body;
    std::vector<CsvTable> tables;
    bool negative = false;  // analysis-level negative verdict
    std::vector<std::string> failures;
};

// Numbers that may be infinite serialize as "inf" / "-inf" strings.
Json number(double x);
Json log_value(const LogValue& v);
Json rational(const Rational& r);
Json rational(const std::optional<Rational>& r);
std::string cell(double x);

Json to_json(const FaithfulnessReport& r);
Json to_json(const CriticalExponent& c);
Json to_json(const CounterexampleReport& r);
Json to_json(const RatioSequence& r);
Json to_json(const BlockMonotonicity& b);
Json to_json(const HypothesisCheck& h);
Json to_json(const InequalityResult& r);
Json to_json(const DimensionBoundReport& r);
Json to_json(const PackingValue& v, std::size_t max_witness = 64);
Json to_json(const DigitWord& w);

// Report JSON with "generated_at" first; the timestamp is the only
// nondeterministic field.
std::string render_json(const Report& r, const std::string& timestamp);
std::string render_csv(const CsvTable& t);
std::string utc_timestamp();

// Writes <dir>/<command>.json or one <command>_<table>.csv per table.
// Returns the written paths.
std::vector<std::string> write_report(const Report& r, const std::string& dir, const std::string& format);

}  // namespace cantorpack
