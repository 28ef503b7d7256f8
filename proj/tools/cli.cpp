#include "cli.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "superliouville/commands.hpp"
#include "superliouville/parallel.hpp"

namespace superliouville {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"super-Liouville solver and verifier"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "single-threaded, deterministic execution");

  std::string config_path;
  std::string out_dir = ".";
  const std::pair<const char*, const char*> commands[] = {
      {"verify", "diagnostics and gates of a configured pair"},
      {"solve", "Newton solve from the configured pair, then verify"},
      {"blowup", "generate a sequence and detect concentration"},
      {"export", "write configured fields as CSV"},
      {"kelvin", "Kelvin transform of the configured pair, then verify"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--serial", serial, "single-threaded, deterministic execution");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  }

  set_serial(serial);
  const std::string command = app.get_subcommands().front()->get_name();
  std::string message;
  const int code = run_command(command, config_path, out_dir, &message);
  (code == kExitPass ? out : err) << command << ": " << message << '\n';
  return code;
}

}  // namespace superliouville
