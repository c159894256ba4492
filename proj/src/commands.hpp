// SPDX-License-Identifier: Apache-2.0
//
// Command layer shared by the C API and the CLI: each command renders its
// own output and returns a stable exit status.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "serialize.hpp"

namespace f4solv {

enum ExitStatus : int {
  kExitOk = 0,
  kExitMismatch = 2,
  kExitAnomaly = 3,
  kExitUsage = 64,
};

enum class FrameChoice { Native, Rho };
enum class OutputFormat { Table, Json, Csv };

FrameChoice parse_frame_choice(std::string_view s);
OutputFormat parse_output_format(std::string_view s);

struct RunConfig {
  ModelParams params;
  /// Command default when absent.
  std::optional<int> level;
  CharVector charvec = kMinimalFlag;
  FrameChoice frame = FrameChoice::Native;
  OutputFormat format = OutputFormat::Table;
  std::uint64_t seed = 0;
  int points = 20;
  int bound = 6;
};

struct CommandResult {
  int status = kExitOk;
  std::string text;
};

/// Operator of the configured model in the configured frame. The rho frame
/// exists only for the trig model (UsageError otherwise).
SecondOrderOp config_operator(const RunConfig& cfg);

struct UsageError : Error {
  using Error::Error;
};

CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_eigenfunctions(const RunConfig& cfg);
/// suite: flag | triangular | oracle | limit | a66 | scan.
CommandResult cmd_verify(const RunConfig& cfg, std::string_view suite);
CommandResult cmd_scan_flags(const RunConfig& cfg);
CommandResult cmd_dump_operator(const RunConfig& cfg);

/// Machine-readable suite report: {suite, params, passed, checks: [...]}.
Json run_verify_suite(const RunConfig& cfg, std::string_view suite);

}  // namespace f4solv
