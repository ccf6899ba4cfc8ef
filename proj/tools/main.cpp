#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "haar/parallel.hpp"

namespace {

constexpr int kSchemaVersion = 1;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"haar-toolkit: Haar-random unitaries, moments, designs and their applications"};
  app.require_subcommand(1, 1);
  haar::cli::Options opts;
  haar::cli::register_commands(app, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  opts.threads = haar::resolve_threads(opts.threads);
  const CLI::App* sub = app.get_subcommands().front();
  nlohmann::json report;
  try {
    nlohmann::json body = haar::cli::run_command(*sub, opts);
    report["schema_version"] = kSchemaVersion;
    report["config"] = std::move(body["config"]);
    report["results"] = std::move(body["results"]);
    report["diagnostics"] = std::move(body["diagnostics"]);
    report["timestamp"] = utc_timestamp();
  } catch (const haar::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << sub->help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string text = report.dump(2) + "\n";
  if (opts.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opts.out);
    if (!(out << text)) {
      std::cerr << "error: cannot write " << opts.out << "\n";
      return 1;
    }
  }
  return 0;
}
