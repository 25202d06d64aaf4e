#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>

#include "dwell/config.hpp"
#include "dwell/errors.hpp"
#include "dwell/runner.hpp"

namespace {

enum Exit : int { ok = 0, config_error = 2, numerical_error = 3, io_error = 4 };

int guarded(const std::function<void()>& body) {
  try {
    body();
    return ok;
  } catch (const dwell::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const dwell::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return io_error;
  } catch (const dwell::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return numerical_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical_error;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dwell: semiquantal double-well laboratory"};
  app.set_version_flag("--version", std::string(dwell::version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  unsigned jobs = 1;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--output", output_dir, "output directory (overrides output.dir)");
  run->add_option("--jobs", jobs, "worker threads for independent sweep points")->check(CLI::Range(1u, 1024u));
  run->add_flag("-q,--quiet", quiet, "no progress messages");

  auto* validate = app.add_subcommand("validate", "parse and check a config file without running it");
  validate->add_option("config", config_path, "config file")->required();

  app.add_subcommand("list-experiments", "list the named experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  if (app.got_subcommand("list-experiments")) {
    for (const auto& info : dwell::experiments()) {
      std::printf("%-10s %s\n", std::string(info.name).c_str(), std::string(info.summary).c_str());
    }
    return ok;
  }

  if (app.got_subcommand("validate")) {
    return guarded([&] {
      const auto config = dwell::load_config(config_path);
      std::printf("%s: valid %s config\n", config_path.c_str(),
                  std::string(dwell::experiment_name(config.experiment)).c_str());
    });
  }

  return guarded([&] {
    const auto config = dwell::load_config(config_path);
    dwell::RunOptions options;
    if (!output_dir.empty()) options.output_dir = output_dir;
    options.jobs = jobs;
    options.log = quiet ? nullptr : &std::cerr;
    const auto result = dwell::run_experiment(config, options);
    std::printf("wrote %zu file(s) and manifest.json to %s\n", result.files.size(), result.output_dir.string().c_str());
  });
}
