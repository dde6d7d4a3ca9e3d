#pragma once

/**
 * @file cli.hpp
 * @brief Subcommands behind the `beurling` executable.
 *
 * Exit codes:
 *   0  success
 *   1  mathematical finding (verification report not empty)
 *   2  generation aborted (gap condition, non-unit mu, failed spot check)
 *   3  operational error (I/O, parse, configuration)
 *
 * Relative output paths are resolved against $BEURLING_OUTPUT_DIR when set.
 */

#include "beurling/generator.hpp"
#include "beurling/record_io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace beurling::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_finding = 1;
inline constexpr int exit_abort = 2;
inline constexpr int exit_error = 3;

inline constexpr const char* output_dir_env = "BEURLING_OUTPUT_DIR";

struct RunConfig
{
	std::uint64_t limit = 0;
	GeneratorMode mode = GeneratorMode::exact;
	RecordFormat output_format = RecordFormat::csv;
	std::filesystem::path output_path;
	std::optional<std::uint64_t> scan_cap;
	std::uint64_t spot_check_interval = 1000;
	bool verify = false;
};

/// Applies $BEURLING_OUTPUT_DIR to a relative path.
std::filesystem::path resolve_output(const std::filesystem::path& path);

/// Path of a sibling artifact: "<path><suffix>" (e.g. records.csv.report.json).
std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix);

/// Streams records to cfg.output_path; with cfg.verify, writes <out>.report.json
/// after generation. On abort writes <out>.abort.json with the state dump.
int cmd_generate(const RunConfig& cfg, std::ostream& log);

/// Reads records (CSV or JSON), sieves to `limit` (default: largest k in the
/// file) and writes <records_path>.report.json.
int cmd_verify(const std::filesystem::path& records_path, std::optional<std::uint64_t> limit,
               std::ostream& log);

/// Writes <out>_t.csv with columns k,t_seconds and <out>_T.csv with k,T_seconds.
int cmd_bench(const RunConfig& cfg, std::ostream& log);

/// Float-mode run: records to cfg.output_path plus <out>.findings.json listing
/// generated k with oracle mu = 0 and the first divergence from the fast stream.
int cmd_demo_float(const RunConfig& cfg, std::ostream& log);

} // namespace beurling::cli
