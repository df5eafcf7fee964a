// sphereframe command-line front end.
//
// Exit codes: 0 success, 1 validation failure, 2 input or parse error, 3 capacity error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "sphereframe/constructions.hpp"
#include "sphereframe/diagnostics.hpp"
#include "sphereframe/errors.hpp"
#include "sphereframe/frames.hpp"
#include "sphereframe/io.hpp"
#include "sphereframe/quadrature.hpp"

using namespace sphereframe;
namespace sc = sphereframe::constructions;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kInput = 2;
constexpr int kCapacity = 3;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    io::write_file(out, text);
  }
}

FrameSpec load_spec(const std::string& path) { return io::read_spec(io::read_file(path)); }

quadrature::GridVariant parse_variant(const std::string& s) {
  try {
    return quadrature::grid_variant_from_string(s);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

// --- build -----------------------------------------------------------------

struct BuildArgs {
  std::string kind = "wavelet";
  int d = 4;
  int K = 4;
  int J = 5;
  std::string window = "kappa1";
  std::string zeta;
  std::string in;
  std::string out;
};

int run_build(const BuildArgs& a) {
  FrameSpec spec;
  if (a.kind == "wavelet") {
    std::optional<sc::ZetaTable> table;
    if (!a.zeta.empty()) table = io::zeta_from_json(io::parse(io::read_file(a.zeta)));
    spec = sc::wavelet_spec(a.d, a.K, a.J, sc::window_from_string(a.window), table ? &*table : nullptr);
  } else if (a.kind == "curvelet") {
    spec = sc::curvelet_spec(a.d, a.J);
  } else if (a.kind == "zonal") {
    spec = sc::zonal_spec(a.d, a.J, sc::window_from_string(a.window));
  } else if (a.kind == "from-file") {
    if (a.in.empty()) throw ParseError("build --kind from-file needs --in");
    spec = load_spec(a.in);
  } else {
    throw ParseError("unknown kind '" + a.kind + "'");
  }
  const std::string text = io::write_spec(spec);
  if (a.out.empty()) {
    std::cout << text;
    return kOk;
  }
  io::write_file(a.out, text);
  const int n_max = std::max(0, spec.max_degree());
  const auto b = frames::frame_bounds(spec, n_max);
  std::cout << "wrote " << a.out << ": d=" << spec.d << " scales=" << spec.scales.size() << " N_max=" << n_max
            << "\nsigma on 0.." << n_max << ": C1=" << b.C1 << " C2=" << b.C2
            << (b.is_frame_on_range ? " (frame on range)" : " (sigma vanishes somewhere)") << "\n";
  return kOk;
}

// --- check / dual ----------------------------------------------------------

struct CheckArgs {
  std::string spec;
  std::string dual;
  int n_max = -1;
  double tol = 1e-12;
  std::string out;
};

int run_check(const CheckArgs& a) {
  const FrameSpec spec = load_spec(a.spec);
  const int n_max = a.n_max >= 0 ? a.n_max : std::max(0, spec.max_degree());
  const auto sigma = frames::sigma_profile(spec, n_max);
  const auto b = frames::frame_bounds(spec, n_max);
  Json rep;
  rep["spec"] = a.spec;
  rep["bounds"] = io::report(b, sigma);
  bool ok = b.is_frame_on_range;
  if (!a.dual.empty()) {
    const FrameSpec dual = load_spec(a.dual);
    const auto sums = frames::dual_sums(spec, dual, n_max);
    std::vector<double> residual;
    double worst = 0.0;
    for (const auto& s : sums) {
      residual.push_back(std::abs(s - 1.0));
      worst = std::max(worst, residual.back());
    }
    rep["dual"] = a.dual;
    rep["dual_residual"] = residual;
    rep["max_dual_residual"] = worst;
    rep["tol"] = a.tol;
    ok = ok && worst <= a.tol;
  }
  rep["pass"] = ok;
  emit(a.out, io::dump(rep));
  return ok ? kOk : kValidation;
}

int run_dual(const std::string& in, const std::string& out) {
  const FrameSpec spec = load_spec(in);
  emit(out, io::write_spec(frames::canonical_dual(spec)));
  return kOk;
}

// --- reconstruct -----------------------------------------------------------

struct ReconstructArgs {
  std::string spec;
  std::string variant = "steerable_so_d2";
  std::optional<int> K;
  std::string signal;
  int random_degree = -1;
  std::uint64_t seed = 1;
  std::string out;
};

int run_reconstruct(const ReconstructArgs& a) {
  const FrameSpec spec = load_spec(a.spec);
  Signal f;
  Json rep;
  if (!a.signal.empty()) {
    f = io::read_signal(io::read_file(a.signal));
    rep["signal"] = a.signal;
  } else {
    if (a.random_degree < 0) throw ParseError("reconstruct needs --signal or --random N");
    f = Signal::random(spec.d, a.random_degree, a.seed);
    rep["random_degree"] = a.random_degree;
  }
  rep["seed"] = a.seed;
  if (f.dim() != spec.d) throw ParseError("signal and spec dimensions differ");
  const auto sys = frames::make_system(spec, parse_variant(a.variant), a.K);
  std::size_t total = 0;
  for (const auto& g : sys.grids) total += g.size();
  const auto dual = frames::canonical_dual(spec);
  const auto coeffs = frames::analysis(sys, f);
  const auto g = frames::synthesis(sys, dual, coeffs, f.degree);
  const double err = frames::relative_error(g.coeffs, f.coeffs);
  rep["spec"] = a.spec;
  rep["grid_variant"] = a.variant;
  rep["rotations"] = total;
  rep["rel_coefficient_error"] = err;
  rep["parseval"] = io::report(frames::parseval_check(sys, f, coeffs));
  emit(a.out, io::dump(rep));
  return kOk;
}

// --- localize / autocorr ---------------------------------------------------

int run_localize(const std::string& in, const std::vector<int>& scales, const std::string& out) {
  const FrameSpec spec = load_spec(in);
  Json rep;
  rep["spec"] = in;
  rep["d"] = spec.d;
  rep["uncertainty_lower_bound"] = (spec.d - 1) * (spec.d - 1) / 4.0;
  rep["scales"] = io::report(diagnostics::localization_report(spec, scales));
  if (spec.scales.size() >= 2) rep["audit"] = io::report(diagnostics::audit_conditions(spec));
  emit(out, io::dump(rep));
  return kOk;
}

int run_autocorr(const std::string& in, int j, int samples, std::uint64_t seed, const std::string& out) {
  const FrameSpec spec = load_spec(in);
  const int d = spec.d;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Json rows = Json::array();
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXd m(d - 1, d - 1);
    for (int r = 0; r < d - 1; ++r)
      for (int c = 0; c < d - 1; ++c) m(r, c) = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    const Rotation h(q);
    const double arg = diagnostics::autocorrelation_argument(h, d);
    const Complex v = diagnostics::autocorrelation(spec, j, h);
    Json row{{"s", arg}, {"re", v.real()}, {"im", v.imag()}};
    try {
      row["closed"] = diagnostics::autocorrelation_closed(spec, j, arg);
    } catch (const ShapeError&) {
      row["closed"] = nullptr;
    }
    rows.push_back(row);
  }
  Json rep;
  rep["spec"] = in;
  rep["j"] = j;
  rep["seed"] = seed;
  rep["samples"] = rows;
  emit(out, io::dump(rep));
  return kOk;
}

// --- figure / quadinfo -----------------------------------------------------

struct FigureArgs {
  std::string spec;
  int j = 5;
  int resolution = 256;
  double t_max = 1.0;
  std::string format = "pgm";
  std::vector<double> eta;
  std::string out;
};

int run_figure(const FigureArgs& a) {
  const FrameSpec spec = load_spec(a.spec);
  if (spec.d >= 4 && diagnostics::invariance_order(spec).value_or(0) < spec.d - 2 && !spec.metadata.base_rotation) {
    std::cerr << "warning: spec is not SO(d-2)-invariant; the picture depends on the eta'' choice\n";
  }
  std::optional<Eigen::VectorXd> eta;
  if (!a.eta.empty()) eta = Eigen::Map<const Eigen::VectorXd>(a.eta.data(), static_cast<Eigen::Index>(a.eta.size()));
  const auto grid = sc::polar_sample(spec, a.j, a.resolution, a.resolution, a.t_max, eta);
  if (a.format == "csv") {
    emit(a.out, sc::to_csv(grid));
  } else if (a.format == "pgm") {
    if (a.out.empty()) throw ParseError("pgm output needs --out");
    io::write_file(a.out, sc::to_pgm(grid));
  } else {
    throw ParseError("unknown format '" + a.format + "'");
  }
  std::cerr << "rescale=" << grid.rescale << " max_imag=" << grid.max_imag << "\n";
  return kOk;
}

int run_quadinfo(int d, int N, const std::string& variant, std::optional<int> K, const std::string& grid_out) {
  const auto v = parse_variant(variant);
  const auto sphere = quadrature::sphere_rule(d, N);
  Json rep;
  rep["d"] = d;
  rep["N"] = N;
  rep["sphere_nodes"] = sphere.size();
  rep["sphere_exact_degree"] = sphere.exact_degree();
  rep["variant"] = variant;
  if (K) rep["K"] = *K;
  rep["rotations"] = quadrature::rotation_rule_size(d, N, v, K);
  rep["max_nodes"] = quadrature::max_nodes();
  if (!grid_out.empty()) io::write_file(grid_out, io::write_grid(quadrature::rotation_rule(d, N, v, K)));
  std::cout << io::dump(rep);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotated-polynomial frames on the sphere"};
  app.require_subcommand(1);
  int threads = 0;
  long long max_nodes = 0;
  app.add_option("--threads", threads, "Worker threads (default: hardware parallelism)");
  app.add_option("--max-nodes", max_nodes, "Cap on quadrature and grid sizes (also SPHEREFRAME_MAX_NODES)");

  BuildArgs build;
  auto* c_build = app.add_subcommand("build", "Generate a frame spec");
  c_build->add_option("--kind", build.kind, "wavelet | curvelet | zonal | from-file");
  c_build->add_option("--d", build.d, "Dimension of the ambient space");
  c_build->add_option("--K", build.K, "Steerability order (wavelets)");
  c_build->add_option("--J", build.J, "Finest scale");
  c_build->add_option("--window", build.window, "kappa1 | kappa2");
  c_build->add_option("--zeta", build.zeta, "Directionality table for d = 3 wavelets");
  c_build->add_option("--in", build.in, "Spec file for --kind from-file");
  c_build->add_option("--out", build.out, "Output file (stdout when omitted)");

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Frame bounds and dual residuals");
  c_check->add_option("--spec", check.spec)->required();
  c_check->add_option("--dual", check.dual, "Second spec tested as a dual");
  c_check->add_option("--n-max", check.n_max, "Degree range (default: spec bandwidth)");
  c_check->add_option("--tol", check.tol);
  c_check->add_option("--out", check.out);

  std::string dual_in, dual_out;
  auto* c_dual = app.add_subcommand("dual", "Canonical dual spec");
  c_dual->add_option("--spec", dual_in)->required();
  c_dual->add_option("--out", dual_out);

  ReconstructArgs rec;
  int rec_K = -1;
  auto* c_rec = app.add_subcommand("reconstruct", "Analysis plus canonical-dual synthesis");
  c_rec->add_option("--spec", rec.spec)->required();
  c_rec->add_option("--grid-variant", rec.variant,
                    "general | steerable | zonal | so_d2_invariant | steerable_so_d2");
  c_rec->add_option("--K", rec_K, "Steerability order for steerable grids (default: spec metadata)");
  c_rec->add_option("--signal", rec.signal);
  c_rec->add_option("--random", rec.random_degree, "Random signal of this degree");
  c_rec->add_option("--seed", rec.seed);
  c_rec->add_option("--out", rec.out);

  std::string loc_spec, loc_out;
  std::vector<int> loc_scales;
  auto* c_loc = app.add_subcommand("localize", "Localization report per scale");
  c_loc->add_option("--spec", loc_spec)->required();
  c_loc->add_option("--scales", loc_scales, "Scales (default: all j >= 1)")->delimiter(',');
  c_loc->add_option("--out", loc_out);

  std::string ac_spec, ac_out;
  int ac_j = 1, ac_samples = 10;
  std::uint64_t ac_seed = 1;
  auto* c_ac = app.add_subcommand("autocorr", "Autocorrelation at random h in SO(d-1)");
  c_ac->add_option("--spec", ac_spec)->required();
  c_ac->add_option("--j", ac_j)->required();
  c_ac->add_option("--samples", ac_samples);
  c_ac->add_option("--seed", ac_seed);
  c_ac->add_option("--out", ac_out);

  FigureArgs fig;
  auto* c_fig = app.add_subcommand("figure", "Polar-grid picture of one scale");
  c_fig->add_option("--spec", fig.spec)->required();
  c_fig->add_option("--j", fig.j);
  c_fig->add_option("--resolution", fig.resolution);
  c_fig->add_option("--t-max", fig.t_max);
  c_fig->add_option("--format", fig.format, "csv | pgm");
  c_fig->add_option("--eta", fig.eta, "Unit vector eta'' with d - 2 entries")->delimiter(',');
  c_fig->add_option("--out", fig.out);

  int q_d = 3, q_N = 4, q_K = -1;
  std::string q_variant = "general", q_grid;
  auto* c_q = app.add_subcommand("quadinfo", "Sizes of sphere and rotation rules");
  c_q->add_option("--d", q_d);
  c_q->add_option("--N", q_N);
  c_q->add_option("--variant", q_variant);
  c_q->add_option("--K", q_K);
  c_q->add_option("--grid-out", q_grid, "Also write the rotation grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);
    if (max_nodes > 0) quadrature::set_max_nodes(static_cast<std::size_t>(max_nodes));

    if (*c_build) return run_build(build);
    if (*c_check) return run_check(check);
    if (*c_dual) return run_dual(dual_in, dual_out);
    if (*c_rec) {
      if (rec_K >= 0) rec.K = rec_K;
      return run_reconstruct(rec);
    }
    if (*c_loc) return run_localize(loc_spec, loc_scales, loc_out);
    if (*c_ac) return run_autocorr(ac_spec, ac_j, ac_samples, ac_seed, ac_out);
    if (*c_fig) return run_figure(fig);
    if (*c_q) return run_quadinfo(q_d, q_N, q_variant, q_K >= 0 ? std::optional<int>(q_K) : std::nullopt, q_grid);
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const NotAFrameError& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
