#pragma once

// Record and report serialization.
//
// Records CSV: header "i,k,mu,gap,t_seconds,T_seconds", one row per record,
// timings as decimal seconds with 6 fractional digits.
// Records JSON: array of objects with the same field names.
// Report JSON: object mirroring VerificationReport in snake case.

#include "beurling/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace beurling {

inline constexpr const char* records_csv_header = "i,k,mu,gap,t_seconds,T_seconds";

/// Malformed or unreadable records input.
class RecordParseError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

enum class RecordFormat { csv, json };

RecordFormat parse_format(const std::string& text);

std::string format_seconds(double seconds);
std::string csv_row(const GeneratedRecord& record);

nlohmann::json to_json(const GeneratedRecord& record);
nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const VerificationReport& report);

/// Incremental writer; the JSON variant emits a well-formed array on finish().
class RecordWriter
{
public:
	RecordWriter(std::ostream& out, RecordFormat format);
	void write(const GeneratedRecord& record);
	void finish();

private:
	std::ostream& out_;
	RecordFormat format_;
	bool first_ = true;
	bool finished_ = false;
};

std::vector<GeneratedRecord> parse_records_csv(std::istream& in);
std::vector<GeneratedRecord> parse_records_json(std::istream& in);
/// Detects the format from the first non-blank character ('[' means JSON).
std::vector<GeneratedRecord> read_records(const std::filesystem::path& path);

} // namespace beurling
