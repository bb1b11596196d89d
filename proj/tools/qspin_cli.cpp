// qspin: run, validate and list scenario kinds.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 1 anything else.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qspin/scenario.hpp"
#include "qspin/scenario_run.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int report_error(const qspin::Error& e) {
  if (const auto* ce = dynamic_cast<const qspin::scenario::ConfigError*>(&e)) {
    std::cerr << "ConfigError: " << ce->issues().size() << " problem(s)\n";
    for (const auto& issue : ce->issues()) std::cerr << "  - " << issue << "\n";
    return kExitConfig;
  }
  std::cerr << e.what() << "\n";
  switch (e.kind()) {
    case qspin::ErrorKind::Config: return kExitConfig;
    case qspin::ErrorKind::Io: return kExitIo;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace sc = qspin::scenario;

  CLI::App app{"qspin: quaternion spin dynamics and field checks"};
  app.require_subcommand(1);

  std::string run_file, validate_file, out_dir, format;
  unsigned threads = qspin::default_thread_count();

  auto* run = app.add_subcommand("run", "Run a scenario file and write its outputs");
  run->add_option("scenario", run_file, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (default: $QSPIN_OUT_DIR or .)");
  run->add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::Range(1u, 1024u));
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", validate_file, "Scenario file")->required();

  auto* list = app.add_subcommand("list-kinds", "Print the known scenario kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list) {
      for (auto k : sc::kAllKinds) std::cout << sc::kind_name(k) << "\n";
      return 0;
    }
    if (*validate) {
      const sc::Scenario s = sc::load_scenario(validate_file);
      std::cout << "ok: " << sc::kind_name(s.kind) << " scenario '" << s.name << "'\n";
      return 0;
    }

    const sc::Scenario s = sc::load_scenario(run_file);
    sc::RunOptions opt;
    if (!out_dir.empty()) {
      opt.out_dir = out_dir;
    } else if (const char* env = std::getenv("QSPIN_OUT_DIR"); env && *env) {
      opt.out_dir = env;
    }
    opt.threads = threads;
    if (!format.empty()) opt.format = sc::parse_format(format);

    const sc::RunReport report = sc::run_scenario(s, opt);
    std::cout << "# scenario\n" << report.echo << "# summary\n";
    for (const auto& [key, value] : report.summary) std::cout << key << " = " << sc::format_double(value) << "\n";
    std::cout << "# files\n";
    for (const auto& f : report.files) std::cout << f.string() << "\n";
    std::cout << "duration_s = " << report.duration_s << "\n";
    return 0;
  } catch (const qspin::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
