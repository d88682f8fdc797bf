#include "zenodyn/io.hpp"

#include <algorithm>
#include <fstream>

namespace zenodyn {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "model file: " + what);
}

Complex parse_complex(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  bad(key + ": entries must be numbers or [re, im] pairs");
}

CMatrix parse_block(const nlohmann::json& j, const std::string& key, Eigen::Index rows,
                    Eigen::Index cols) {
  if (!j.contains(key)) return CMatrix::Zero(rows, cols);
  const auto& v = j.at(key);
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows * cols) {
    bad(key + ": expected a flat list of " + std::to_string(rows * cols) + " entries");
  }
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = parse_complex(v[static_cast<std::size_t>(r * cols + c)], key);
    }
  }
  return m;
}

nlohmann::json block_to_json(const CMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return out;
}

}  // namespace

ModelFile parse_model(const nlohmann::json& j) {
  if (!j.is_object()) bad("top level must be an object");
  ModelFile file;
  file.source = j;
  NonHermitianHamiltonian& h = file.hamiltonian;

  if (j.contains("diag_A")) {
    if (!j.at("diag_A").is_array()) bad("diag_A must be a list");
    for (const auto& e : j.at("diag_A")) {
      if (!e.is_object() || !e.contains("delta") || !e.contains("phi")) {
        bad("diag_A entries need delta and phi");
      }
      h.diag_a.push_back(DiagonalEntry{e.at("delta").get<double>(), e.at("phi").get<double>()});
      file.swept.push_back(e.value("sweep", false));
    }
  }
  if (!j.contains("diag_B") || !j.at("diag_B").is_array()) bad("diag_B list is required");
  for (const auto& e : j.at("diag_B")) {
    if (!e.is_number()) bad("diag_B entries must be real numbers");
    h.diag_b.push_back(e.get<double>());
  }
  if (j.contains("dim_A") && j.at("dim_A").get<Eigen::Index>() != h.dim_a()) bad("dim_A disagrees with diag_A");
  if (j.contains("dim_B") && j.at("dim_B").get<Eigen::Index>() != h.dim_b()) bad("dim_B disagrees with diag_B");

  h.coupling = parse_block(j, "coupling", h.dim_a(), h.dim_b());
  h.intra_b = parse_block(j, "intra_B", h.dim_b(), h.dim_b());
  h.validate();

  // No explicit flags: every A entry follows the sweep axes.
  if (std::none_of(file.swept.begin(), file.swept.end(), [](bool b) { return b; })) {
    file.swept.assign(file.swept.size(), true);
  }
  return file;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("JSON syntax: ") + e.what());
  }
  return parse_model(j);
}

nlohmann::json model_to_json(const NonHermitianHamiltonian& h) {
  nlohmann::json j;
  j["dim_A"] = h.dim_a();
  j["dim_B"] = h.dim_b();
  j["diag_A"] = nlohmann::json::array();
  for (const auto& e : h.diag_a) j["diag_A"].push_back({{"delta", e.delta}, {"phi", e.phi}});
  j["diag_B"] = h.diag_b;
  j["coupling"] = block_to_json(h.coupling_block());
  j["intra_B"] = block_to_json(h.intra_b_block());
  return j;
}

OpenSystemModel open_system_from_json(const ModelFile& file) {
  const nlohmann::json& j = file.source;
  const NonHermitianHamiltonian& h = file.hamiltonian;
  const Eigen::Index n = h.dim();
  const Eigen::Index q = j.value("dim_G", Eigen::Index{1});
  if (q < 1) bad("dim_G must be >= 1");

  OpenSystemModel model;
  model.dim_r = n;
  model.dim_g = q;
  model.h_s = CMatrix::Zero(n + q, n + q);
  model.h_s.topLeftCorner(n, n) = hermitianize(h);
  if (j.contains("ground_energies")) {
    const auto& g = j.at("ground_energies");
    if (!g.is_array() || static_cast<Eigen::Index>(g.size()) != q) bad("ground_energies needs dim_G entries");
    for (Eigen::Index k = 0; k < q; ++k) model.h_s(n + k, n + k) = g[static_cast<std::size_t>(k)].get<double>();
  }
  const CMatrix rg = parse_block(j, "coupling_RG", n, q);
  model.h_s.topRightCorner(n, q) = rg;
  model.h_s.bottomLeftCorner(q, n) = rg.adjoint();

  if (j.contains("jumps")) {
    for (const auto& x : j.at("jumps")) {
      if (!x.is_object() || !x.contains("k") || !x.contains("j") || !x.contains("gamma")) {
        bad("jumps entries need k, j and gamma");
      }
      model.jumps.push_back(Jump{x.at("k").get<Eigen::Index>() - 1, x.at("j").get<Eigen::Index>() - 1,
                                 x.at("gamma").get<double>()});
    }
  } else {
    for (Eigen::Index m = 0; m < h.dim_a(); ++m) {
      const double rate = 2.0 * h.diag_a[static_cast<std::size_t>(m)].decay_rate();
      if (rate > 0.0) model.jumps.push_back(Jump{m, n, rate});
    }
  }
  model.validate();
  return model;
}

}  // namespace zenodyn
