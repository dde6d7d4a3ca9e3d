// beurling: generate, verify and time the fractional-part recursion for mu(n).
//
//   beurling generate   --limit N [--mode exact|fast|float] --out PATH [--format csv|json]
//                       [--scan-cap N] [--spot-check N] [--verify]
//   beurling verify     RECORDS [--limit N]
//   beurling bench      --limit N [--mode ...] --out STEM
//   beurling demo-float --limit N --out PATH

#include "beurling/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags
{
	std::uint64_t limit = 0;
	std::string mode = "exact";
	std::string format = "csv";
	std::string out;
	std::uint64_t scan_cap = 0;
	std::uint64_t spot_check = 1000;
	bool verify = false;
};

void add_run_flags(CLI::App* cmd, Flags& f, bool with_mode)
{
	cmd->add_option("--limit", f.limit, "Generate every k <= N")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{4000000000}));
	if (with_mode)
		cmd->add_option("--mode", f.mode, "exact | fast | float")
		    ->check(CLI::IsMember({"exact", "fast", "float", "float-demo"}));
	cmd->add_option("--out", f.out, "Output path")->required();
	cmd->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
	cmd->add_option("--scan-cap", f.scan_cap, "Largest gap probed (default k_i)");
	cmd->add_option("--spot-check", f.spot_check, "Fast mode: exact re-verification interval")
	    ->check(CLI::PositiveNumber);
	cmd->add_flag("--verify", f.verify, "Verify against the sieve after generation");
}

beurling::cli::RunConfig to_config(const Flags& f)
{
	beurling::cli::RunConfig cfg;
	cfg.limit = f.limit;
	cfg.mode = beurling::parse_mode(f.mode);
	cfg.output_format = beurling::parse_format(f.format);
	cfg.output_path = f.out;
	if (f.scan_cap > 0)
		cfg.scan_cap = f.scan_cap;
	cfg.spot_check_interval = f.spot_check;
	cfg.verify = f.verify;
	return cfg;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Square-free numbers and mu(n) from fractional-part combinations"};
	app.require_subcommand(1);

	Flags gen_flags, bench_flags, demo_flags;
	auto* generate = app.add_subcommand("generate", "Generate (i, k, mu, gap, t, T) records");
	add_run_flags(generate, gen_flags, true);

	auto* bench = app.add_subcommand("bench", "Write (k, t) and (k, T) timing CSVs");
	add_run_flags(bench, bench_flags, true);

	auto* demo = app.add_subcommand("demo-float", "Run the recursion in binary64 and report artifacts");
	add_run_flags(demo, demo_flags, false);

	std::string records_path;
	std::uint64_t verify_limit = 0;
	auto* verify = app.add_subcommand("verify", "Audit a records file against the sieve");
	verify->add_option("records", records_path, "Records CSV or JSON")->required();
	verify->add_option("--limit", verify_limit, "Sieve limit (default: largest k in the file)");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : beurling::cli::exit_error;
	}

	try {
		if (*generate)
			return beurling::cli::cmd_generate(to_config(gen_flags), std::cerr);
		if (*bench)
			return beurling::cli::cmd_bench(to_config(bench_flags), std::cerr);
		if (*demo)
			return beurling::cli::cmd_demo_float(to_config(demo_flags), std::cerr);
		if (*verify)
			return beurling::cli::cmd_verify(
			    records_path, verify_limit ? std::optional(verify_limit) : std::nullopt, std::cerr);
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return beurling::cli::exit_error;
	}
	return beurling::cli::exit_error;
}
