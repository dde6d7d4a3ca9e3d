#include "beurling/record_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace beurling {

RecordFormat parse_format(const std::string& text)
{
	if (text == "csv")
		return RecordFormat::csv;
	if (text == "json")
		return RecordFormat::json;
	throw std::invalid_argument("unknown output format '" + text + "'");
}

std::string format_seconds(double seconds)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.6f", seconds);
	return buf;
}

std::string csv_row(const GeneratedRecord& r)
{
	return std::to_string(r.index) + ',' + std::to_string(r.k) + ',' + std::to_string(r.mu) + ',' +
	       std::to_string(r.gap) + ',' + format_seconds(r.t_seconds) + ',' +
	       format_seconds(r.T_seconds);
}

namespace {

double rounded_micro(double seconds)
{
	return std::round(seconds * 1e6) / 1e6;
}

} // namespace

nlohmann::json to_json(const GeneratedRecord& r)
{
	return {{"i", r.index},
	        {"k", r.k},
	        {"mu", r.mu},
	        {"gap", r.gap},
	        {"t_seconds", rounded_micro(r.t_seconds)},
	        {"T_seconds", rounded_micro(r.T_seconds)}};
}

nlohmann::json to_json(const ConditionReport& r)
{
	return {{"step_index", r.step_index},
	        {"condition", std::string(1, to_char(r.condition))},
	        {"holds", r.holds},
	        {"lhs", to_string(r.lhs)},
	        {"rhs", to_string(r.rhs)}};
}

nlohmann::json to_json(const VerificationReport& report)
{
	nlohmann::json mismatches = nlohmann::json::array();
	for (const auto& m : report.mu_mismatches)
		mismatches.push_back({{"k", m.k}, {"generated_mu", m.generated_mu}, {"oracle_mu", m.oracle_mu}});
	nlohmann::json gaps = nlohmann::json::array();
	for (const auto& g : report.gap_violations)
		gaps.push_back({{"i", g.index}, {"k_i", g.k}, {"k_next", g.k_next}});
	nlohmann::json conditions = nlohmann::json::array();
	for (const auto& c : report.conditions_failed)
		conditions.push_back(to_json(c));
	return {{"limit", report.limit},
	        {"missing_square_free", report.missing_square_free},
	        {"square_full_generated", report.square_full_generated},
	        {"mu_mismatches", mismatches},
	        {"gap_violations", gaps},
	        {"conditions_failed", conditions},
	        {"mean_gap", to_string(report.mean_gap)},
	        {"mean_gap_decimal", report.mean_gap.get_d()},
	        {"consistent", report.consistent()}};
}

RecordWriter::RecordWriter(std::ostream& out, RecordFormat format) : out_(out), format_(format)
{
	if (format_ == RecordFormat::csv)
		out_ << records_csv_header << '\n';
	else
		out_ << "[";
}

void RecordWriter::write(const GeneratedRecord& record)
{
	if (format_ == RecordFormat::csv) {
		out_ << csv_row(record) << '\n';
		return;
	}
	out_ << (first_ ? "\n  " : ",\n  ") << to_json(record).dump();
	first_ = false;
}

void RecordWriter::finish()
{
	if (finished_)
		return;
	finished_ = true;
	if (format_ == RecordFormat::json)
		out_ << (first_ ? "]\n" : "\n]\n");
	out_.flush();
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* name)
{
	T value{};
	const auto* end = text.data() + text.size();
	const auto [ptr, ec] = std::from_chars(text.data(), end, value);
	if (ec != std::errc() || ptr != end || text.empty())
		throw RecordParseError("line " + std::to_string(line) + ": bad " + name + " field '" +
		                       std::string(text) + "'");
	return value;
}

double parse_seconds(const std::string& text, std::size_t line)
{
	std::size_t used = 0;
	double value = 0.0;
	try {
		value = std::stod(text, &used);
	} catch (const std::exception&) {
		used = 0;
	}
	if (used == 0 || used != text.size())
		throw RecordParseError("line " + std::to_string(line) + ": bad timing field '" + text + "'");
	return value;
}

} // namespace

std::vector<GeneratedRecord> parse_records_csv(std::istream& in)
{
	std::string line;
	if (!std::getline(in, line))
		throw RecordParseError("empty records file");
	if (!line.empty() && line.back() == '\r')
		line.pop_back();
	if (line != records_csv_header)
		throw RecordParseError("unexpected CSV header '" + line + "'");

	std::vector<GeneratedRecord> out;
	std::size_t line_no = 1;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r')
			line.pop_back();
		if (line.empty())
			continue;
		std::vector<std::string> fields;
		std::stringstream ss(line);
		std::string field;
		while (std::getline(ss, field, ','))
			fields.push_back(field);
		if (fields.size() != 6)
			throw RecordParseError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
			                       std::to_string(fields.size()));
		GeneratedRecord r;
		r.index = parse_field<std::uint64_t>(fields[0], line_no, "i");
		r.k = parse_field<std::uint64_t>(fields[1], line_no, "k");
		r.mu = parse_field<std::int64_t>(fields[2], line_no, "mu");
		r.gap = parse_field<std::uint64_t>(fields[3], line_no, "gap");
		r.t_seconds = parse_seconds(fields[4], line_no);
		r.T_seconds = parse_seconds(fields[5], line_no);
		out.push_back(r);
	}
	return out;
}

std::vector<GeneratedRecord> parse_records_json(std::istream& in)
{
	nlohmann::json doc;
	try {
		doc = nlohmann::json::parse(in);
	} catch (const nlohmann::json::exception& e) {
		throw RecordParseError(std::string("malformed JSON records: ") + e.what());
	}
	if (!doc.is_array())
		throw RecordParseError("JSON records must be an array");
	std::vector<GeneratedRecord> out;
	out.reserve(doc.size());
	try {
		for (const auto& item : doc) {
			GeneratedRecord r;
			r.index = item.at("i").get<std::uint64_t>();
			r.k = item.at("k").get<std::uint64_t>();
			r.mu = item.at("mu").get<std::int64_t>();
			r.gap = item.at("gap").get<std::uint64_t>();
			r.t_seconds = item.at("t_seconds").get<double>();
			r.T_seconds = item.at("T_seconds").get<double>();
			out.push_back(r);
		}
	} catch (const nlohmann::json::exception& e) {
		throw RecordParseError(std::string("bad JSON record: ") + e.what());
	}
	return out;
}

std::vector<GeneratedRecord> read_records(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in)
		throw RecordParseError("cannot open " + path.string());
	char first = 0;
	while (in.get(first) && std::isspace(static_cast<unsigned char>(first))) {
	}
	if (!in)
		throw RecordParseError("empty records file " + path.string());
	in.unget();
	return first == '[' ? parse_records_json(in) : parse_records_csv(in);
}

} // namespace beurling
