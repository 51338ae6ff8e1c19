#include "mcrem/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mcrem/bench_catalog.hpp"
#include "mcrem/conductivity.hpp"
#include "mcrem/error.hpp"
#include "mcrem/tsvd.hpp"

namespace mcrem {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t const pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view field) {
  text = trim(text);
  T value{};
  auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(field) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_doubles(std::string_view text, std::string_view field) {
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::vector<double> out;
  std::istringstream in(normalized);
  std::string tok;
  while (in >> tok) out.push_back(parse_number<double>(tok, field));
  return out;
}

void write_csv_row(std::ostream& os, std::initializer_list<std::string_view> cells) {
  bool first = true;
  for (auto c : cells) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot open '" + p.string() + "' for writing");
  return os;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + p.string() + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    for (auto c : split(line, ',')) cells.emplace_back(c);
    rows.push_back(std::move(cells));
  }
  return rows;
}

void split_counts(std::vector<bench::ComponentCount>& parts, std::size_t total,
                  const char* field) {
  if (parts.empty()) {
    if (total != 0) {
      throw ConfigError(std::string(field) + ": this example has no such boundary part");
    }
    return;
  }
  if (total == 0 || total % parts.size() != 0) {
    throw ConfigError(std::string(field) + " must be a positive multiple of " +
                      std::to_string(parts.size()));
  }
  for (auto& p : parts) p.count = total / parts.size();
}

ConductivityTensor make_tensor(const RunConfig& cfg, int dim) {
  if (cfg.k.empty()) return ConductivityTensor::identity(dim);
  auto const d = static_cast<std::size_t>(dim);
  if (cfg.k.size() != d * d) {
    throw ConfigError("K: expected " + std::to_string(d * d) + " entries");
  }
  linalg::DenseMatrix raw(d, d);
  std::copy(cfg.k.begin(), cfg.k.end(), raw.data().begin());
  return ConductivityTensor::make(raw);
}

BoundaryPointSet gamma0_anchors(const MeasurementSet& meas, const Domain& dom) {
  BoundaryPointSet set;
  auto const ids = dom.components_of(Part::gamma0);
  for (auto const& p : meas.boundary_points) {
    std::size_t best = ids.front();
    for (std::size_t c : ids) {
      if (std::abs(dom.component_distance(c, p)) <
          std::abs(dom.component_distance(best, p))) {
        best = c;
      }
    }
    set.points.push_back(p);
    set.component_ids.push_back(best);
    set.params.push_back(0.0);
  }
  return set;
}

struct ReplicateResult {
  EstimatorBundle bundle;
  SpectralSolution spectrum;
  TsvdFamily family;
  std::vector<bench::ReconstructionError> errors;
};

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void RunConfig::validate() const {
  auto const ids = bench::example_ids();
  if (std::find(ids.begin(), ids.end(), example) == ids.end()) {
    throw ConfigError("example: unknown id '" + example + "'");
  }
  if (solution) bench::ExactSolution::get(*solution);
  if (!solution && !measurements) {
    throw ConfigError("solution: a solution or a measurement file is required");
  }
  if (m0 && *m0 == 0 && !bench::example(example).gamma0.empty()) {
    throw ConfigError("m0 must be at least 1");
  }
  if (m1 && *m1 == 0) throw ConfigError("m1 must be at least 1");
  if (md && *md == 0) throw ConfigError("md must be at least 1");
  if (n && (*n < 1 || *n >= (std::uint64_t{1} << 31))) {
    throw ConfigError("n must lie in [1, 2^31)");
  }
  if (eps && !(*eps > 0.0 && std::isfinite(*eps))) {
    throw ConfigError("eps must be positive");
  }
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  for (std::size_t r : r_list) {
    if (r < 1) throw ConfigError("r: truncation levels start at 1");
  }
  if (!k.empty() && k.size() != 4 && k.size() != 9) {
    throw ConfigError("K: expected 4 or 9 entries");
  }
  if (!(noise >= 0.0 && std::isfinite(noise))) {
    throw ConfigError("noise must be a nonnegative amplitude");
  }
  if (!(idw.power > 0.0) || !(idw.radius_factor > 0.0)) {
    throw ConfigError("idw_power and idw_radius_factor must be positive");
  }
  if (threads < 0) throw ConfigError("threads must be nonnegative");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
}

std::vector<std::size_t> parse_r_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto tok : split(text, ',')) {
    if (tok.empty()) continue;
    std::size_t const dash = tok.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_number<std::size_t>(tok, "r"));
      continue;
    }
    auto const lo = parse_number<std::size_t>(tok.substr(0, dash), "r");
    auto const hi = parse_number<std::size_t>(tok.substr(dash + 1), "r");
    if (hi < lo) throw ConfigError("r: descending range '" + std::string(tok) + "'");
    for (std::size_t r = lo; r <= hi; ++r) out.push_back(r);
  }
  if (out.empty()) throw ConfigError("r: empty truncation list");
  return out;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "example") {
    cfg.example = std::string(value);
  } else if (key == "solution") {
    cfg.solution = std::string(value);
  } else if (key == "measurements") {
    cfg.measurements = std::filesystem::path(std::string(value));
  } else if (key == "m0") {
    cfg.m0 = parse_number<std::size_t>(value, key);
  } else if (key == "m1") {
    cfg.m1 = parse_number<std::size_t>(value, key);
  } else if (key == "md") {
    cfg.md = parse_number<std::size_t>(value, key);
  } else if (key == "K") {
    cfg.k = parse_doubles(value, key);
  } else if (key == "profile") {
    if (value == "desk") {
      cfg.profile = Profile::desk;
    } else if (value == "paper") {
      cfg.profile = Profile::paper;
    } else {
      throw ConfigError("profile: expected 'desk' or 'paper'");
    }
  } else if (key == "n") {
    cfg.n = parse_number<std::uint64_t>(value, key);
  } else if (key == "eps") {
    cfg.eps = parse_number<double>(value, key);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(value, key);
  } else if (key == "replicates") {
    cfg.replicates = parse_number<std::size_t>(value, key);
  } else if (key == "r") {
    cfg.r_list = parse_r_list(value);
  } else if (key == "weights") {
    if (value == "voronoi") {
      cfg.weights = WeightKind::voronoi;
    } else if (value == "idw") {
      cfg.weights = WeightKind::idw;
    } else {
      throw ConfigError("weights: expected 'voronoi' or 'idw'");
    }
  } else if (key == "idw_power") {
    cfg.idw.power = parse_number<double>(value, key);
  } else if (key == "idw_radius_factor") {
    cfg.idw.radius_factor = parse_number<double>(value, key);
  } else if (key == "noise") {
    cfg.noise = parse_number<double>(value, key);
  } else if (key == "out") {
    cfg.out = std::filesystem::path(std::string(value));
  } else if (key == "threads") {
    cfg.threads = parse_number<int>(value, key);
  } else if (key == "max_steps") {
    cfg.max_steps = parse_number<std::uint64_t>(value, key);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

RunConfig parse_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view const t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::size_t const eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(base, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return base;
}

IngestResult ingest_measurements(const std::filesystem::path& path,
                                 const Domain& dom, double eps) {
  auto const rows = read_csv(path);
  if (rows.empty()) throw InvalidInput("measurement file is empty");
  auto const& header = rows.front();
  int const dim = dom.dim();
  std::size_t const base_cols = static_cast<std::size_t>(dim) + 2;
  bool const has_nu = header.size() == base_cols + 1 && header.back() == "nu";
  if (header.size() != base_cols + (has_nu ? 1 : 0) || header[0] != "kind" ||
      header[base_cols - 1] != "value") {
    throw InvalidInput("measurement header must be kind,x1,..,x" +
                       std::to_string(dim) + ",value[,nu]");
  }

  IngestResult res;
  MeasurementSet& m = res.measurements;
  std::vector<double> nu;
  auto const gamma0 = dom.components_of(Part::gamma0);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto const& row = rows[r];
    std::string const where = "measurement row " + std::to_string(r);
    if (row.size() != header.size() && !(has_nu && row.size() == base_cols)) {
      throw InvalidInput(where + ": wrong number of columns");
    }
    Point p{0, 0, 0};
    double value = 0.0;
    try {
      for (int k = 0; k < dim; ++k) p[k] = parse_number<double>(row[1 + k], "x");
      value = parse_number<double>(row[base_cols - 1], "value");
    } catch (const ConfigError& e) {
      throw InvalidInput(where + ": " + e.what());
    }
    if (row[0] == "interior") {
      if (!(dom.dist_to_boundary(p) > eps)) {
        throw InvalidInput(where + ": interior point is not inside the domain");
      }
      m.interior_points.push_back(p);
      m.interior_values.push_back(value);
      if (has_nu) {
        if (row.size() <= base_cols) throw InvalidInput(where + ": missing nu");
        double const v = parse_number<double>(row[base_cols], "nu");
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(where + ": nu must be positive");
        nu.push_back(v);
      }
    } else if (row[0] == "gamma0") {
      bool on = false;
      for (std::size_t c : gamma0) {
        on = on || std::abs(dom.component_distance(c, p)) <= 1e-9;
      }
      if (!on) throw InvalidInput(where + ": point is not on Gamma0");
      m.boundary_points.push_back(p);
      m.boundary_values.push_back(value);
    } else {
      throw InvalidInput(where + ": kind must be 'interior' or 'gamma0'");
    }
  }
  if (m.interior_points.empty()) throw InvalidInput("measurement file has no interior rows");
  if (has_nu) {
    double s2 = 0.0;
    for (double v : nu) s2 += v * v;
    if (std::abs(s2 - 1.0) > 1e-6) {
      res.warnings.push_back("nu renormalized: sum of squares was " + format_double(s2));
    }
    double const scale = 1.0 / std::sqrt(s2);
    for (double& v : nu) v *= scale;
    m.nu = std::move(nu);
  } else {
    m.nu = MeasurementSet::uniform_nu(m.interior_points.size());
  }
  m.validate(dom, eps);
  return res;
}

void write_measurements_csv(const std::filesystem::path& path,
                            const MeasurementSet& meas, int dim) {
  auto os = open_out(path);
  os << "kind";
  for (int k = 1; k <= dim; ++k) os << ",x" << k;
  os << ",value\n";
  auto emit = [&](std::string_view kind, const Point& p, double v) {
    os << kind;
    for (int k = 0; k < dim; ++k) os << ',' << format_double(p[k]);
    os << ',' << format_double(v) << '\n';
  };
  for (std::size_t i = 0; i < meas.num_interior(); ++i) {
    emit("interior", meas.interior_points[i], meas.interior_values[i]);
  }
  for (std::size_t i = 0; i < meas.num_boundary(); ++i) {
    emit("gamma0", meas.boundary_points[i], meas.boundary_values[i]);
  }
}

void write_bundle(const std::filesystem::path& dir, const EstimatorBundle& b,
                  std::string_view suffix) {
  std::filesystem::create_directories(dir);
  auto write_matrix = [&](const char* stem, const linalg::DenseMatrix& a) {
    auto os = open_out(dir / (std::string(stem) + std::string(suffix) + ".csv"));
    os << "pole";
    for (std::size_t j = 0; j < a.cols(); ++j) os << ',' << j;
    os << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
      os << i;
      for (std::size_t j = 0; j < a.cols(); ++j) os << ',' << format_double(a(i, j));
      os << '\n';
    }
  };
  write_matrix("A1", b.a1);
  write_matrix("A0", b.a0);
  json j;
  j["n"] = b.n;
  j["eps"] = b.eps;
  j["seed"] = b.seed;
  j["m_d"] = b.a1.rows();
  j["m1"] = b.a1.cols();
  j["m0"] = b.a0.cols();
  j["sigma"] = b.sigma1;
  j["nu"] = b.nu;
  auto os = open_out(dir / ("bundle" + std::string(suffix) + ".json"));
  os << j.dump(2) << '\n';
}

EstimatorBundle read_bundle(const std::filesystem::path& dir,
                            std::string_view suffix) {
  std::ifstream in(dir / ("bundle" + std::string(suffix) + ".json"));
  if (!in) throw InvalidInput("bundle sidecar not found in '" + dir.string() + "'");
  json const j = json::parse(in);
  EstimatorBundle b;
  b.n = j.at("n").get<std::uint64_t>();
  b.eps = j.at("eps").get<double>();
  b.seed = j.at("seed").get<std::uint64_t>();
  b.sigma1 = j.at("sigma").get<std::vector<double>>();
  b.nu = j.at("nu").get<std::vector<double>>();
  auto const md = j.at("m_d").get<std::size_t>();
  auto read_matrix = [&](const char* stem, std::size_t cols) {
    auto const rows = read_csv(dir / (std::string(stem) + std::string(suffix) + ".csv"));
    if (rows.size() != md + 1) throw InvalidInput(std::string(stem) + ": wrong row count");
    linalg::DenseMatrix a(md, cols);
    for (std::size_t i = 0; i < md; ++i) {
      if (rows[i + 1].size() != cols + 1) {
        throw InvalidInput(std::string(stem) + ": wrong column count");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        a(i, c) = parse_number<double>(rows[i + 1][c + 1], stem);
      }
    }
    return a;
  };
  b.a1 = read_matrix("A1", j.at("m1").get<std::size_t>());
  b.a0 = read_matrix("A0", j.at("m0").get<std::size_t>());
  b.lambda_nu = lambda_nu(b.a1, b.sigma1, b.nu);
  return b;
}

RunReport run(const RunConfig& cfg) {
  auto const t0 = std::chrono::steady_clock::now();
  cfg.validate();
  RunReport report;

  bench::ExampleConfig ex = bench::example(cfg.example);
  if (cfg.m0) split_counts(ex.gamma0, *cfg.m0, "m0");
  if (cfg.m1) split_counts(ex.gamma1, *cfg.m1, "m1");
  if (cfg.md) ex.m_d = *cfg.md;
  bench::ExampleSetup const setup = bench::build_setup(ex);
  Domain const& dom = setup.domain;
  ConductivityTensor const k = make_tensor(cfg, ex.dim);
  double const eps = cfg.eps.value_or(ex.eps);
  std::uint64_t const n =
      cfg.n.value_or(cfg.profile == Profile::paper ? ex.n_paper : ex.n_desk);

  std::optional<bench::ExactSolution> sol;
  if (cfg.solution) sol = bench::ExactSolution::get(*cfg.solution);

  MeasurementSet meas;
  if (cfg.measurements) {
    IngestResult ing = ingest_measurements(*cfg.measurements, dom, eps);
    meas = std::move(ing.measurements);
    report.warnings.insert(report.warnings.end(), ing.warnings.begin(),
                           ing.warnings.end());
  } else {
    meas = bench::synthesize_measurements(setup, *sol, k);
  }
  std::optional<std::vector<double>> truth;
  if (sol) truth = bench::boundary_truth(setup, *sol);

  auto make_family = [&](BoundaryPointSet pts) {
    return cfg.weights == WeightKind::voronoi
               ? WeightFamily::voronoi(std::move(pts), ex.dim)
               : WeightFamily::idw(std::move(pts), ex.dim, cfg.idw);
  };
  WeightFamily const fam1 = make_family(setup.x1);
  std::unique_ptr<WeightFamily> fam0;
  if (!dom.components_of(Part::gamma0).empty()) {
    if (meas.boundary_points.empty()) {
      throw ConfigError("measurements: Gamma0 is nonempty but has no data points");
    }
    fam0 = std::make_unique<WeightFamily>(make_family(gamma0_anchors(meas, dom)));
  }
  std::vector<double> const sigma1 = cell_measures(fam1, dom);

  std::vector<std::size_t> r_list = cfg.r_list;
  if (r_list.empty()) {
    r_list.resize(std::min<std::size_t>(15, meas.num_interior()));
    std::iota(r_list.begin(), r_list.end(), std::size_t{1});
  }

  std::vector<ReplicateResult> results;
  for (std::size_t s = 0; s < cfg.replicates; ++s) {
    std::uint64_t const seed = cfg.seed + s;
    MeasurementSet ms = meas;
    add_uniform_noise(ms.interior_values, cfg.noise, seed);
    WalkConfig wc;
    wc.eps = eps;
    wc.seed = seed;
    wc.max_steps = cfg.max_steps;
    McRemOptions opts;
    opts.threads = cfg.threads;
    ReplicateResult rr;
    rr.bundle = mc_rem(dom, k, ms, fam1, fam0.get(), sigma1, wc, n, opts);
    rr.spectrum = spectrum(rr.bundle);
    rr.family = tsvd_family(rr.bundle, ms, r_list);
    if (truth) rr.errors = bench::reconstruction_error(*truth, rr.family, sigma1);
    if (rr.bundle.idw_fallbacks > 0) {
      report.warnings.push_back("replicate " + std::to_string(s) + ": " +
                                std::to_string(rr.bundle.idw_fallbacks) +
                                " exits outside every IDW support used Voronoi");
    }
    results.push_back(std::move(rr));
  }

  std::filesystem::create_directories(cfg.out);
  auto const out = [&](const char* name) {
    report.files.push_back(cfg.out / name);
    return open_out(cfg.out / name);
  };
  std::size_t const reps = results.size();
  bool const with_mean = reps > 1;
  double const inv_reps = 1.0 / static_cast<double>(reps);
  std::size_t const md = meas.num_interior();
  std::size_t const m1 = fam1.size();
  auto const rep_label = [](std::size_t s) { return std::to_string(s); };

  {
    auto os = out("eigenvalues.csv");
    os << "replicate,index,lambda,gap\n";
    std::vector<double> ml(md, 0.0), mg(md, 0.0);
    for (std::size_t s = 0; s < reps; ++s) {
      auto const& sp = results[s].spectrum;
      for (std::size_t i = 0; i < md; ++i) {
        write_csv_row(os, {rep_label(s), std::to_string(i + 1),
                           format_double(sp.eigenvalues[i]), format_double(sp.gaps[i])});
        ml[i] += sp.eigenvalues[i] * inv_reps;
        mg[i] += sp.gaps[i] * inv_reps;
      }
    }
    if (with_mean) {
      for (std::size_t i = 0; i < md; ++i) {
        write_csv_row(os, {"mean", std::to_string(i + 1), format_double(ml[i]),
                           format_double(mg[i])});
      }
    }
  }
  {
    auto os = out("density.csv");
    os << "replicate,pole,anchor,param,rho\n";
    linalg::DenseMatrix mean_rho(md + 1, m1);
    for (std::size_t s = 0; s < reps; ++s) {
      auto const& b = results[s].bundle;
      for (std::size_t i = 0; i <= md; ++i) {
        DensityEstimate const d = i < md ? density(b, i) : averaged_density(b);
        std::string const pole = i < md ? std::to_string(i) : "avg";
        for (std::size_t j = 0; j < m1; ++j) {
          write_csv_row(os, {rep_label(s), pole, std::to_string(j),
                             format_double(setup.x1.params[j]), format_double(d.values[j])});
          mean_rho(i, j) += d.values[j] * inv_reps;
        }
      }
    }
    if (with_mean) {
      for (std::size_t i = 0; i <= md; ++i) {
        std::string const pole = i < md ? std::to_string(i) : "avg";
        for (std::size_t j = 0; j < m1; ++j) {
          write_csv_row(os, {"mean", pole, std::to_string(j),
                             format_double(setup.x1.params[j]), format_double(mean_rho(i, j))});
        }
      }
    }
  }
  {
    // Eigenvectors carry an arbitrary sign per replicate, so no mean rows.
    auto os = out("eigvecs.csv");
    os << "replicate,j,anchor,value\n";
    for (std::size_t s = 0; s < reps; ++s) {
      auto const& tr = results[s].spectrum.traces;
      for (std::size_t j = 0; j < tr.rows(); ++j) {
        for (std::size_t a = 0; a < tr.cols(); ++a) {
          write_csv_row(os, {rep_label(s), std::to_string(j + 1), std::to_string(a),
                             format_double(tr(j, a))});
        }
      }
    }
  }
  {
    auto os = out("tsvd.csv");
    os << (truth ? "replicate,r,anchor,u,truth\n" : "replicate,r,anchor,u\n");
    linalg::DenseMatrix mean_u(r_list.size(), m1);
    auto emit = [&](const std::string& rep, std::size_t r, std::size_t a, double u) {
      if (truth) {
        write_csv_row(os, {rep, std::to_string(r), std::to_string(a), format_double(u),
                           format_double((*truth)[a])});
      } else {
        write_csv_row(os, {rep, std::to_string(r), std::to_string(a), format_double(u)});
      }
    };
    for (std::size_t s = 0; s < reps; ++s) {
      auto const& f = results[s].family;
      for (std::size_t q = 0; q < r_list.size(); ++q) {
        for (std::size_t a = 0; a < m1; ++a) {
          emit(rep_label(s), r_list[q], a, f.solutions(q, a));
          mean_u(q, a) += f.solutions(q, a) * inv_reps;
        }
      }
    }
    if (with_mean) {
      for (std::size_t q = 0; q < r_list.size(); ++q) {
        for (std::size_t a = 0; a < m1; ++a) emit("mean", r_list[q], a, mean_u(q, a));
      }
    }
  }
  {
    auto os = out("residuals.csv");
    os << "replicate,r,pole,abs_residual\n";
    linalg::DenseMatrix mean_res(r_list.size(), md);
    for (std::size_t s = 0; s < reps; ++s) {
      auto const& f = results[s].family;
      for (std::size_t q = 0; q < r_list.size(); ++q) {
        for (std::size_t i = 0; i < md; ++i) {
          write_csv_row(os, {rep_label(s), std::to_string(r_list[q]), std::to_string(i),
                             format_double(f.residuals(q, i))});
          mean_res(q, i) += f.residuals(q, i) * inv_reps;
        }
      }
    }
    if (with_mean) {
      for (std::size_t q = 0; q < r_list.size(); ++q) {
        for (std::size_t i = 0; i < md; ++i) {
          write_csv_row(os, {"mean", std::to_string(r_list[q]), std::to_string(i),
                             format_double(mean_res(q, i))});
        }
      }
    }
  }
  for (std::size_t s = 0; s < reps; ++s) {
    std::string const suffix = reps > 1 ? "_" + std::to_string(s) : "";
    write_bundle(cfg.out, results[s].bundle, suffix);
    for (const char* stem : {"A1", "A0"}) {
      report.files.push_back(cfg.out / (std::string(stem) + suffix + ".csv"));
    }
    report.files.push_back(cfg.out / ("bundle" + suffix + ".json"));
  }

  json summary;
  summary["example"] = cfg.example;
  summary["solution"] = sol ? json(std::string(sol->name())) : json(nullptr);
  summary["n"] = n;
  summary["eps"] = eps;
  summary["seed"] = cfg.seed;
  summary["replicates"] = reps;
  summary["weights"] = cfg.weights == WeightKind::voronoi ? "voronoi" : "idw";
  summary["noise"] = cfg.noise;
  summary["r"] = r_list;
  summary["m0"] = meas.num_boundary();
  summary["m1"] = m1;
  summary["m_d"] = md;
  json reps_json = json::array();
  for (std::size_t s = 0; s < reps; ++s) {
    auto const& rr = results[s];
    std::vector<double> const mu = rr.bundle.mu_gamma1();
    double const avg = std::accumulate(mu.begin(), mu.end(), 0.0) / static_cast<double>(md);
    report.mu_gamma1_avg.push_back(avg);
    json rj;
    rj["seed"] = cfg.seed + s;
    rj["mu_gamma1"] = mu;
    rj["mu_gamma1_avg"] = avg;
    double mean_steps = 0.0;
    std::uint64_t max_steps = 0;
    for (auto const& st : rr.bundle.steps) {
      mean_steps += st.mean / static_cast<double>(md);
      max_steps = std::max(max_steps, st.max);
    }
    rj["steps"] = {{"mean", mean_steps}, {"max", max_steps}};
    std::vector<bool> warnings(rr.family.gap_warnings.begin(), rr.family.gap_warnings.end());
    rj["gap_warnings"] = warnings;
    if (truth) {
      json errs = json::array();
      for (std::size_t q = 0; q < r_list.size(); ++q) {
        auto const& e = rr.errors[q];
        errs.push_back({{"r", r_list[q]}, {"l2", e.l2}, {"linf", e.linf},
                        {"l2_absolute", e.absolute}});
      }
      rj["errors"] = errs;
    }
    double max_res = 0.0;
    json res = json::array();
    for (std::size_t q = 0; q < r_list.size(); ++q) {
      auto row = rr.family.residuals.row(q);
      double const m = *std::max_element(row.begin(), row.end());
      res.push_back({{"r", r_list[q]}, {"max_abs_residual", m}});
      max_res = std::max(max_res, m);
    }
    rj["residuals"] = res;
    rj["idw_fallbacks"] = rr.bundle.idw_fallbacks;
    reps_json.push_back(rj);
  }
  summary["per_replicate"] = reps_json;
  summary["mu_gamma1_avg"] =
      std::accumulate(report.mu_gamma1_avg.begin(), report.mu_gamma1_avg.end(), 0.0) *
      inv_reps;
  if (truth && with_mean) {
    json errs = json::array();
    for (std::size_t q = 0; q < r_list.size(); ++q) {
      double l2 = 0.0, linf = 0.0;
      for (auto const& rr : results) {
        l2 += rr.errors[q].l2 * inv_reps;
        linf += rr.errors[q].linf * inv_reps;
      }
      errs.push_back({{"r", r_list[q]}, {"l2_mean", l2}, {"linf_mean", linf}});
    }
    summary["errors_mean"] = errs;
  }
  summary["warnings"] = report.warnings;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  summary["wall_clock_seconds"] = report.wall_seconds;
  {
    auto os = out("summary.json");
    os << summary.dump(2) << '\n';
  }
  return report;
}

}  // namespace mcrem
