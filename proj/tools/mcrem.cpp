// mcrem: run the Monte Carlo reconstruction pipeline from the command line.
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 runtime failure.

#include <array>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mcrem/error.hpp"
#include "mcrem/pipeline.hpp"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

constexpr std::array kFlags{
    Flag{"example", "benchmark example id (ex5_1 .. ex5_7)"},
    Flag{"solution", "exact solution id used to synthesize data"},
    Flag{"measurements", "CSV with kind,x1,..,xd,value[,nu] rows"},
    Flag{"m0", "total Gamma0 points, split equally across its components"},
    Flag{"m1", "total Gamma1 anchors, split equally across its components"},
    Flag{"md", "number of interior measurement points"},
    Flag{"K", "conductivity entries, row-major, comma separated"},
    Flag{"profile", "default walk count: desk or paper"},
    Flag{"n", "walks per pole"},
    Flag{"eps", "shell thickness"},
    Flag{"seed", "base seed; replicate s uses seed + s"},
    Flag{"replicates", "number of i.i.d. replicates"},
    Flag{"r", "truncation levels, e.g. 1,2,5-8"},
    Flag{"weights", "voronoi or idw"},
    Flag{"idw_power", "IDW exponent"},
    Flag{"idw_radius_factor", "IDW support radius over anchor spacing"},
    Flag{"noise", "uniform noise amplitude on interior data"},
    Flag{"out", "output directory"},
    Flag{"threads", "OpenMP threads, 0 for the default"},
    Flag{"max_steps", "per-walk step budget"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo reconstruction of inaccessible boundary data"};
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; flags override it");
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (auto const& f : kFlags) {
    options[f.name] = app.add_option(std::string("--") + f.name, values[f.name], f.help);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    mcrem::RunConfig cfg;
    if (!config_path.empty()) cfg = mcrem::parse_config_file(config_path, cfg);
    for (auto const& f : kFlags) {
      if (options[f.name]->count() > 0) mcrem::apply_setting(cfg, f.name, values[f.name]);
    }
    mcrem::RunReport const report = mcrem::run(cfg);
    for (auto const& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << report.files.size() << " files to " << cfg.out.string()
              << " in " << mcrem::format_double(report.wall_seconds) << " s\n";
    return 0;
  } catch (const mcrem::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mcrem::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mcrem::EllipticityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mcrem::GeometryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
