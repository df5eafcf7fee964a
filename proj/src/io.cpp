#include "sphereframe/io.hpp"

#include <fstream>
#include <sstream>

#include "sphereframe/errors.hpp"

namespace sphereframe::io {

namespace {

void expect_kind(const Json& j, const char* kind) {
  if (!j.is_object()) throw ParseError(std::string("expected a ") + kind + " object");
  if (j.value("kind", std::string()) != kind) {
    throw ParseError(std::string("expected kind '") + kind + "'");
  }
  if (j.at("version").get<int>() != kFormatVersion) throw ParseError("unsupported format version");
}

Json coeff_rows(const CoeffTable& t) {
  Json rows = Json::array();
  for (const auto& [key, c] : t) rows.push_back(Json::array({key.n, key.k.entries(), c.real(), c.imag()}));
  return rows;
}

CoeffTable coeffs_from_rows(int d, const Json& rows) {
  if (!rows.is_array()) throw ParseError("coeffs must be an array");
  CoeffTable t(d);
  for (const auto& r : rows) {
    if (!r.is_array() || r.size() != 4) throw ParseError("coefficient rows are [n, k, re, im]");
    const auto n = r[0].get<int>();
    const MultiIndex k(r[1].get<std::vector<int>>());
    if (t.contains(n, k)) throw ParseError("duplicate coefficient at n = " + std::to_string(n) + ", k = " + k.to_string());
    t.set(n, k, Complex(r[2].get<double>(), r[3].get<double>()));
  }
  return t;
}

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_rows(int d, const Json& rows) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) throw ParseError("matrix must have d rows");
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != d) throw ParseError("matrix rows must have d entries");
    for (int c = 0; c < d; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

// JSON library errors and library validation errors both surface as ParseError
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const FrameSpec& spec) {
  Json j;
  j["kind"] = "frame_spec";
  j["version"] = kFormatVersion;
  j["d"] = spec.d;
  Json meta = Json::object();
  if (spec.metadata.steerable_K) meta["steerable_K"] = *spec.metadata.steerable_K;
  if (spec.metadata.invariant_m) meta["invariant_m"] = *spec.metadata.invariant_m;
  if (spec.metadata.base_rotation) meta["base_rotation"] = matrix_rows(spec.metadata.base_rotation->matrix());
  j["metadata"] = meta;
  Json scales = Json::array();
  for (const auto& s : spec.scales) {
    Json sj;
    sj["j"] = s.j;
    sj["N"] = s.N;
    sj["coeffs"] = coeff_rows(s.coeffs);
    scales.push_back(sj);
  }
  j["scales"] = scales;
  return j;
}

FrameSpec spec_from_json(const Json& j) {
  return guarded("frame spec", [&] {
    expect_kind(j, "frame_spec");
    FrameSpec spec;
    spec.d = j.at("d").get<int>();
    if (spec.d < 3) throw ParseError("d must be >= 3");
    const auto& meta = j.at("metadata");
    if (meta.contains("steerable_K")) spec.metadata.steerable_K = meta["steerable_K"].get<int>();
    if (meta.contains("invariant_m")) spec.metadata.invariant_m = meta["invariant_m"].get<int>();
    if (meta.contains("base_rotation")) {
      spec.metadata.base_rotation = Rotation::checked(matrix_from_rows(spec.d, meta["base_rotation"]));
    }
    for (const auto& sj : j.at("scales")) {
      spec.scales.push_back(Scale{sj.at("j").get<int>(), sj.at("N").get<int>(), coeffs_from_rows(spec.d, sj.at("coeffs"))});
    }
    spec.validate();
    return spec;
  });
}

Json to_json(const Signal& f) {
  Json j;
  j["kind"] = "signal";
  j["version"] = kFormatVersion;
  j["d"] = f.dim();
  j["N"] = f.degree;
  j["coeffs"] = coeff_rows(f.coeffs);
  return j;
}

Signal signal_from_json(const Json& j) {
  return guarded("signal", [&] {
    expect_kind(j, "signal");
    const int d = j.at("d").get<int>();
    if (d < 3) throw ParseError("d must be >= 3");
    return Signal(j.at("N").get<int>(), coeffs_from_rows(d, j.at("coeffs")));
  });
}

Json to_json(const quadrature::RotationRule& grid) {
  Json j;
  j["kind"] = "rotation_grid";
  j["version"] = kFormatVersion;
  j["d"] = grid.dim();
  j["class_degree"] = grid.class_degree();
  j["variant"] = quadrature::to_string(grid.variant());
  if (grid.K()) j["K"] = *grid.K();
  Json rots = Json::array();
  Json weights = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::MatrixXd m = grid.rotation(i);
    Json flat = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
    rots.push_back(flat);
    weights.push_back(grid.weight(i));
  }
  j["rotations"] = rots;
  j["weights"] = weights;
  return j;
}

quadrature::RotationRule grid_from_json(const Json& j) {
  return guarded("rotation grid", [&] {
    expect_kind(j, "rotation_grid");
    const int d = j.at("d").get<int>();
    const auto& rots = j.at("rotations");
    const auto weights = j.at("weights").get<std::vector<double>>();
    if (rots.size() != weights.size()) throw ParseError("rotations and weights differ in length");
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(rots.size());
    for (const auto& r : rots) {
      const auto flat = r.get<std::vector<double>>();
      if (static_cast<int>(flat.size()) != d * d) throw ParseError("each rotation needs d*d entries");
      Eigen::MatrixXd m(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) m(a, b) = flat[static_cast<std::size_t>(a * d + b)];
      mats.push_back(Rotation::checked(m).matrix());
    }
    std::optional<int> K;
    if (j.contains("K")) K = j["K"].get<int>();
    return quadrature::RotationRule(d, j.at("class_degree").get<int>(),
                                    quadrature::grid_variant_from_string(j.at("variant").get<std::string>()), K,
                                    std::move(mats), weights);
  });
}

Json to_json(const constructions::ZetaTable& table) {
  Json j;
  j["kind"] = "zeta_table";
  j["version"] = kFormatVersion;
  Json rows = Json::array();
  for (const auto& [n, row] : table) {
    Json entries = Json::array();
    for (const auto& [k, v] : row) entries.push_back(Json::array({k, v}));
    rows.push_back(Json{{"n", n}, {"entries", entries}});
  }
  j["rows"] = rows;
  return j;
}

constructions::ZetaTable zeta_from_json(const Json& j) {
  return guarded("zeta table", [&] {
    expect_kind(j, "zeta_table");
    constructions::ZetaTable t;
    for (const auto& r : j.at("rows")) {
      auto& row = t[r.at("n").get<int>()];
      for (const auto& e : r.at("entries")) {
        if (!e.is_array() || e.size() != 2) throw ParseError("zeta entries are [k, value]");
        row[e[0].get<int>()] = e[1].get<double>();
      }
    }
    if (t.empty()) throw ParseError("zeta table has no rows");
    return t;
  });
}

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string write_spec(const FrameSpec& spec) { return dump(to_json(spec)); }
FrameSpec read_spec(const std::string& text) { return spec_from_json(parse(text)); }
std::string write_signal(const Signal& f) { return dump(to_json(f)); }
Signal read_signal(const std::string& text) { return signal_from_json(parse(text)); }
std::string write_grid(const quadrature::RotationRule& grid) { return dump(to_json(grid)); }
quadrature::RotationRule read_grid(const std::string& text) { return grid_from_json(parse(text)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ParseError("write to '" + path + "' failed");
}

Json report(const frames::FrameBounds& b, const frames::SpectralProfile& sigma) {
  Json j;
  j["C1"] = b.C1;
  j["C2"] = b.C2;
  j["is_frame_on_range"] = b.is_frame_on_range;
  j["n_max"] = static_cast<int>(sigma.size()) - 1;
  j["zero_degrees"] = b.zero_degrees;
  j["sigma"] = sigma;
  return j;
}

Json report(const std::vector<diagnostics::ScaleLocalization>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["j"] = r.j;
    j["N"] = r.N;
    j["norm_sq"] = r.norm_sq;
    j["xi0_d"] = r.xi0_d;
    j["xi0_vec"] = std::vector<double>(r.xi0_vec.data(), r.xi0_vec.data() + r.xi0_vec.size());
    j["var_space"] = r.var_space;
    j["var_space_upper"] = r.var_space_upper;
    j["var_momentum"] = r.var_momentum;
    j["uncertainty_product"] = r.uncertainty_product;
    j["var_space_times_4j"] = r.var_space * std::ldexp(1.0, 2 * r.j);
    out.push_back(j);
  }
  return out;
}

Json report(const std::vector<diagnostics::ScaleAudit>& rows) {
  Json out = Json::array();
  for (const auto& a : rows) {
    Json j;
    j["j"] = a.j;
    j["N"] = a.N;
    j["M"] = a.M;
    j["norm_sq"] = a.norm_sq;
    j["c1_ratio"] = a.c1_ratio;
    j["m_ratio"] = a.m_ratio;
    j["c3"] = a.c3;
    j["c4"] = a.c4;
    j["size_bound"] = a.size_bound;
    out.push_back(j);
  }
  return out;
}

Json report(const frames::ParsevalReport& p) {
  return Json{{"discrete_sum", p.discrete_sum}, {"spectral_sum", p.spectral_sum}, {"rel_gap", p.rel_gap}};
}

}  // namespace sphereframe::io
