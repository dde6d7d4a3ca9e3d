#include "beurling/cli.hpp"

#include "beurling/sieve.hpp"
#include "beurling/verifier.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace beurling::cli {

namespace fs = std::filesystem;

fs::path resolve_output(const fs::path& path)
{
	if (path.is_absolute())
		return path;
	if (const char* dir = std::getenv(output_dir_env); dir && *dir)
		return fs::path(dir) / path;
	return path;
}

fs::path sibling(const fs::path& path, const std::string& suffix)
{
	return fs::path(path.string() + suffix);
}

namespace {

bool valid(const RunConfig& cfg, std::ostream& log)
{
	if (cfg.limit < 2) {
		log << "error: --limit must be >= 2\n";
		return false;
	}
	if (cfg.spot_check_interval < 1) {
		log << "error: --spot-check must be >= 1\n";
		return false;
	}
	if (cfg.scan_cap && *cfg.scan_cap < 1) {
		log << "error: --scan-cap must be >= 1\n";
		return false;
	}
	if (cfg.output_path.empty()) {
		log << "error: --out is required\n";
		return false;
	}
	return true;
}

RunOptions options_of(const RunConfig& cfg)
{
	RunOptions o;
	o.mode = cfg.mode;
	o.scan_cap = cfg.scan_cap;
	o.spot_check_interval = cfg.spot_check_interval;
	return o;
}

bool open_for_write(std::ofstream& out, const fs::path& path, std::ostream& log)
{
	if (path.has_parent_path()) {
		std::error_code ec;
		fs::create_directories(path.parent_path(), ec);
	}
	out.open(path, std::ios::out | std::ios::trunc);
	if (!out) {
		log << "error: cannot write " << path.string() << '\n';
		return false;
	}
	return true;
}

bool write_json(const fs::path& path, const nlohmann::json& doc, std::ostream& log)
{
	std::ofstream out;
	if (!open_for_write(out, path, log))
		return false;
	out << doc.dump(2) << '\n';
	out.flush();
	if (!out) {
		log << "error: failed writing " << path.string() << '\n';
		return false;
	}
	return true;
}

template <typename Scalar>
nlohmann::json dump_terms(const BasicCombination<Scalar>& b)
{
	nlohmann::json terms = nlohmann::json::array();
	for (const auto& t : b.terms()) {
		if constexpr (std::is_same_v<Scalar, ExactRational>)
			terms.push_back({t.scale, to_string(t.coefficient)});
		else
			terms.push_back({t.scale, t.coefficient});
	}
	return terms;
}

nlohmann::json abort_dump(const GeneratorError& e, const Generator& gen)
{
	nlohmann::json doc = {{"kind", std::string(to_string(e.kind()))},
	                      {"message", e.what()},
	                      {"i", e.index()},
	                      {"k_i", e.k()},
	                      {"mode", std::string(to_string(gen.options().mode))},
	                      {"limit", gen.limit()}};
	const History& history = gen.history();
	nlohmann::json tail = nlohmann::json::array();
	const std::size_t from = history.size() > 32 ? history.size() - 32 : 0;
	for (std::size_t j = from; j < history.size(); ++j)
		tail.push_back({{"k", history[j].k}, {"mu", history[j].mu}});
	doc["history_tail"] = tail;
	doc["history_length"] = history.size();
	if (const auto* s = gen.exact_state()) {
		doc["b_at_k"] = to_string(s->b_at_k);
		doc["combination"] = dump_terms(s->b);
	} else if (const auto* f = gen.float_state()) {
		doc["b_at_k"] = f->b_at_k;
		doc["combination"] = dump_terms(f->b);
	}
	return doc;
}

int report_abort(const GeneratorError& e, const Generator& gen, const fs::path& out,
                 std::ostream& log)
{
	log << "generation aborted: " << e.what() << '\n';
	const fs::path dump = sibling(out, ".abort.json");
	if (write_json(dump, abort_dump(e, gen), log))
		log << "state dump: " << dump.string() << '\n';
	return exit_abort;
}

} // namespace

int cmd_generate(const RunConfig& cfg, std::ostream& log)
{
	if (!valid(cfg, log))
		return exit_error;
	const fs::path out_path = resolve_output(cfg.output_path);
	std::ofstream out;
	if (!open_for_write(out, out_path, log))
		return exit_error;

	Generator gen(cfg.limit, options_of(cfg));
	RecordWriter writer(out, cfg.output_format);
	std::vector<GeneratedRecord> kept;
	try {
		while (auto record = gen.next()) {
			writer.write(*record);
			if (cfg.verify)
				kept.push_back(*record);
		}
	} catch (const GeneratorError& e) {
		writer.finish();
		return report_abort(e, gen, out_path, log);
	}
	writer.finish();
	if (!out) {
		log << "error: failed writing " << out_path.string() << '\n';
		return exit_error;
	}
	log << "generated " << gen.history().size() << " records up to " << cfg.limit << " ("
	    << to_string(cfg.mode) << ") -> " << out_path.string() << '\n';
	if (!cfg.verify)
		return exit_ok;

	const MobiusSieve sieve(cfg.limit);
	const VerificationReport report = verify_run(kept, cfg.limit, sieve);
	const fs::path report_path = sibling(out_path, ".report.json");
	if (!write_json(report_path, to_json(report), log))
		return exit_error;
	log << "verification " << (report.consistent() ? "clean" : "FOUND INCONSISTENCIES") << " -> "
	    << report_path.string() << '\n';
	return report.consistent() ? exit_ok : exit_finding;
}

int cmd_verify(const fs::path& records_path, std::optional<std::uint64_t> limit, std::ostream& log)
{
	std::vector<GeneratedRecord> records;
	try {
		records = read_records(records_path);
	} catch (const RecordParseError& e) {
		log << "error: " << e.what() << '\n';
		return exit_error;
	}
	if (records.empty()) {
		log << "error: no records in " << records_path.string() << '\n';
		return exit_error;
	}
	std::uint64_t max_k = 0;
	for (const auto& r : records)
		max_k = std::max(max_k, r.k);
	const std::uint64_t n = limit.value_or(max_k);
	if (n < 1) {
		log << "error: verification limit must be >= 1\n";
		return exit_error;
	}

	VerificationReport report;
	try {
		const MobiusSieve sieve(n);
		report = verify_run(records, n, sieve);
	} catch (const std::exception& e) {
		log << "error: " << e.what() << '\n';
		return exit_error;
	}
	const fs::path report_path = sibling(records_path, ".report.json");
	if (!write_json(report_path, to_json(report), log))
		return exit_error;
	log << "verified " << records.size() << " records up to " << n << ": "
	    << (report.consistent() ? "consistent" : "findings present") << " -> "
	    << report_path.string() << '\n';
	return report.consistent() ? exit_ok : exit_finding;
}

int cmd_bench(const RunConfig& cfg, std::ostream& log)
{
	if (!valid(cfg, log))
		return exit_error;
	const fs::path stem = resolve_output(cfg.output_path);
	const fs::path step_path = sibling(stem, "_t.csv");
	const fs::path total_path = sibling(stem, "_T.csv");
	std::ofstream step_out, total_out;
	if (!open_for_write(step_out, step_path, log) || !open_for_write(total_out, total_path, log))
		return exit_error;
	step_out << "k,t_seconds\n";
	total_out << "k,T_seconds\n";

	Generator gen(cfg.limit, options_of(cfg));
	int code = exit_ok;
	try {
		while (auto r = gen.next()) {
			step_out << r->k << ',' << format_seconds(r->t_seconds) << '\n';
			total_out << r->k << ',' << format_seconds(r->T_seconds) << '\n';
		}
	} catch (const GeneratorError& e) {
		code = report_abort(e, gen, stem, log);
	}
	step_out.flush();
	total_out.flush();
	if (!step_out || !total_out) {
		log << "error: failed writing bench output\n";
		return exit_error;
	}
	log << "bench (" << to_string(cfg.mode) << ", limit " << cfg.limit << ") -> "
	    << step_path.string() << ", " << total_path.string() << '\n';
	return code;
}

int cmd_demo_float(const RunConfig& cfg_in, std::ostream& log)
{
	RunConfig cfg = cfg_in;
	cfg.mode = GeneratorMode::float_demo;
	if (!valid(cfg, log))
		return exit_error;
	const fs::path out_path = resolve_output(cfg.output_path);
	std::ofstream out;
	if (!open_for_write(out, out_path, log))
		return exit_error;

	Generator gen(cfg.limit, options_of(cfg));
	RecordWriter writer(out, cfg.output_format);
	std::vector<GeneratedRecord> records;
	std::vector<double> deltas;
	nlohmann::json aborted = nullptr;
	try {
		while (auto r = gen.next()) {
			writer.write(*r);
			records.push_back(*r);
			deltas.push_back(r->index <= 2 ? static_cast<double>(r->mu) : gen.last_float_delta());
		}
	} catch (const GeneratorError& e) {
		aborted = abort_dump(e, gen);
		aborted.erase("combination");
	}
	writer.finish();
	if (!out) {
		log << "error: failed writing " << out_path.string() << '\n';
		return exit_error;
	}

	const MobiusSieve sieve(cfg.limit);
	nlohmann::json square_full = nlohmann::json::array();
	std::size_t mismatches = 0;
	for (std::size_t j = 0; j < records.size(); ++j) {
		const auto& r = records[j];
		const int oracle = sieve.mu(r.k);
		if (r.mu != oracle)
			++mismatches;
		if (oracle != 0)
			continue;
		const std::uint64_t p = sieve.square_divisor_base(r.k);
		square_full.push_back({{"i", r.index},
		                       {"k", r.k},
		                       {"mu", r.mu},
		                       {"delta", deltas[j]},
		                       {"square_divisor", p * p},
		                       {"divisible_by", std::to_string(p) + "^2"}});
	}

	// Reference stream from the integer fast path.
	nlohmann::json divergence = nullptr;
	try {
		const auto reference = run(cfg.limit, RunOptions{GeneratorMode::fast, std::nullopt, 1000});
		const std::size_t common = std::min(reference.size(), records.size());
		std::size_t pos = 0;
		while (pos < common && reference[pos].k == records[pos].k && reference[pos].mu == records[pos].mu)
			++pos;
		if (pos < common || reference.size() != records.size()) {
			divergence = {{"position", pos + 1}};
			divergence["float_k"] = pos < records.size() ? nlohmann::json(records[pos].k) : nullptr;
			divergence["float_mu"] = pos < records.size() ? nlohmann::json(records[pos].mu) : nullptr;
			divergence["reference_k"] =
			    pos < reference.size() ? nlohmann::json(reference[pos].k) : nullptr;
			divergence["reference_mu"] =
			    pos < reference.size() ? nlohmann::json(reference[pos].mu) : nullptr;
		}
	} catch (const GeneratorError& e) {
		divergence = {{"reference_error", e.what()}};
	}

	const nlohmann::json findings = {{"limit", cfg.limit},
	                                 {"records", records.size()},
	                                 {"square_full_generated", square_full},
	                                 {"mu_mismatches", mismatches},
	                                 {"aborted", aborted},
	                                 {"reference_mode", "fast"},
	                                 {"first_divergence", divergence}};
	const fs::path findings_path = sibling(out_path, ".findings.json");
	if (!write_json(findings_path, findings, log))
		return exit_error;
	log << "float demo: " << records.size() << " records, " << square_full.size()
	    << " square-full, " << mismatches << " mu mismatches"
	    << (divergence.is_null() ? ", identical to exact stream" : ", diverges from exact stream")
	    << " -> " << findings_path.string() << '\n';
	return exit_ok;
}

} // namespace beurling::cli
