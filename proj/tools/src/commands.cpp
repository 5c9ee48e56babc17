#include "supcast_tools/commands.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <sstream>

#include "supcast/error.hpp"
#include "supcast_tools/csv.hpp"
#include "supcast_tools/verify.hpp"

namespace supcast::tools {
namespace {

constexpr const char* kUsage =
    "usage: supcast <command> [options]\n"
    "\n"
    "commands:\n"
    "  run      simulate a broadcast sweep and write per-user CSV rows\n"
    "  verify   check the optimiser against brute-force oracles\n"
    "           (--suite matching|power|distortion|all)\n"
    "  synth    write a synthetic raw luma video\n"
    "\n"
    "Run 'supcast <command> --help' for the options of a command.\n";

std::vector<std::string> tail(const std::vector<std::string>& args) {
  return {args.begin() + 1, args.end()};
}

// Parses a small CLI11 app; returns an exit code when parsing ends the command.
std::optional<int> parse_app(CLI::App& app, const std::vector<std::string>& args,
                             std::ostream& out, std::ostream& err) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return std::nullopt;
}

int verify_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"supcast verify"};
  std::string suite = "all";
  app.add_option("--suite", suite, "matching | power | distortion | all")
      ->check(CLI::IsMember({"matching", "power", "distortion", "all"}));
  if (auto code = parse_app(app, args, out, err)) return *code;
  return cmd_verify(suite, out) ? kExitOk : kExitFailure;
}

int synth_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"supcast synth"};
  std::string kind = "moving-pattern";
  std::size_t width = 352, height = 288, gop = 4, gops = 1;
  std::uint64_t seed = 7;
  std::string path;
  app.add_option("--kind", kind)
      ->check(CLI::IsMember({"constant", "gradient", "moving-pattern"}));
  app.add_option("--width", width)->check(CLI::PositiveNumber);
  app.add_option("--height", height)->check(CLI::PositiveNumber);
  app.add_option("--gop", gop)->check(CLI::PositiveNumber);
  app.add_option("--gops", gops)->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  app.add_option("--out", path)->required();
  if (auto code = parse_app(app, args, out, err)) return *code;

  const SyntheticKind k = kind == "constant"   ? SyntheticKind::constant
                          : kind == "gradient" ? SyntheticKind::gradient
                                               : SyntheticKind::moving_pattern;
  write_raw_video(path, synthetic_video(k, width, height, gop, gops, seed));
  out << "wrote " << gops * gop << " frames of " << width << "x" << height << " to " << path
      << '\n';
  return kExitOk;
}

}  // namespace

void cmd_run(const Config& config, std::ostream& log) {
  const auto video = load_video(config);
  const auto sweep = make_sweep(config);
  const auto rows = run_experiment(video, sweep);
  write_csv(config.out, rows);

  log << "wrote " << rows.size() << " rows to " << config.out.string() << '\n';
  log << std::fixed << std::setprecision(2);
  for (const auto& cell : summarize(rows)) {
    log << std::left << std::setw(11) << to_string(cell.scheme) << std::right << " snr "
        << std::setw(5) << cell.snr_db << " dB  beta " << cell.beta << "  psnr "
        << std::setw(6) << cell.mean_psnr_db << " dB";
    if (cell.seeds > 1) log << " +/- " << cell.std_error_db;
    log << '\n';
  }
}

bool cmd_verify(const std::string& suite, std::ostream& log) {
  std::vector<verify::CheckResult> checks;
  auto add = [&](std::vector<verify::CheckResult> more) {
    checks.insert(checks.end(), more.begin(), more.end());
  };
  if (suite == "matching" || suite == "all") add(verify::matching_suite());
  if (suite == "power" || suite == "all") add(verify::power_suite());
  if (suite == "distortion" || suite == "all") add(verify::distortion_suite());
  if (checks.empty()) throw InputError("unknown verification suite '" + suite + "'");

  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    log << (c.pass ? "PASS " : "FAIL ") << c.name << ": measured " << std::setprecision(6)
        << c.measured << ' ' << c.relation << ' ' << c.threshold;
    if (!c.detail.empty()) log << " (" << c.detail << ')';
    log << '\n';
  }
  return ok;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  const std::string& command = args.front();
  try {
    if (command == "-h" || command == "--help" || command == "help") {
      out << kUsage;
      return kExitOk;
    }
    if (command == "run") {
      Config config;
      try {
        config = parse_config(tail(args));
      } catch (const HelpRequested& help) {
        out << help.what();
        return kExitOk;
      }
      cmd_run(config, out);
      return kExitOk;
    }
    if (command == "verify") return verify_command(tail(args), out, err);
    if (command == "synth") return synth_command(tail(args), out, err);
    err << "error: unknown command '" << command << "'\n" << kUsage;
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace supcast::tools
