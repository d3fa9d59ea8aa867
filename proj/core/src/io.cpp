#include "kqd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kqd/errors.hpp"

namespace kqd::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  out << text;
}

std::string lattice_to_json(const EdgeColoredLattice& lat,
                            const std::vector<HeavyHexCoord>* coords) {
  json j;
  j["n_sites"] = lat.n_sites();
  json edges = json::array();
  for (int e = 0; e < lat.n_edges(); ++e)
    edges.push_back({lat.edge(e).a, lat.edge(e).b, lat.coupling(e),
                     std::string(1, color_char(lat.color(e)))});
  j["edges"] = std::move(edges);
  if (coords) {
    json cs = json::array();
    for (const auto& c : *coords) cs.push_back({c.row, c.col, c.rung});
    j["coords"] = std::move(cs);
  }
  return j.dump(2) + "\n";
}

EdgeColoredLattice lattice_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<Edge> edges;
  std::vector<double> coupling;
  std::vector<EdgeColor> colors;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    coupling.push_back(e.at(2).get<double>());
    colors.push_back(color_from_char(e.at(3).get<std::string>().at(0)));
  }
  return EdgeColoredLattice(j.at("n_sites").get<int>(), std::move(edges),
                            std::move(coupling), std::move(colors));
}

std::string circuit_to_json(const LayeredCircuit& circ) {
  json j;
  j["n_sites"] = circ.n_sites;
  if (circ.control_qubit) j["control"] = *circ.control_qubit;
  j["vacuum_phase"] = circ.vacuum_phase;
  json layers = json::array();
  for (const auto& layer : circ.layers) {
    json l;
    if (layer.color) l["color"] = std::string(1, color_char(*layer.color));
    json gates = json::array();
    for (const Gate& g : layer.gates) {
      if (g.kind == Gate::Kind::CX)
        gates.push_back({"CX", g.a, g.b});
      else
        gates.push_back({"HEIS", g.a, g.b, g.angle});
    }
    l["gates"] = std::move(gates);
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  return j.dump(2) + "\n";
}

namespace {
json provenance_to_json(const Provenance& p) {
  json j;
  j["mode"] = to_string(p.mode);
  j["n_shots"] = p.n_shots;
  j["seed"] = p.seed;
  j["twirls"] = p.twirls;
  j["gains"] = p.gains;
  if (!p.noise_model.empty()) j["noise_model"] = p.noise_model;
  if (p.n_system > 0) j["n_system"] = p.n_system;
  return j;
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "exact") p.mode = Provenance::Mode::Exact;
  else if (mode == "shots") p.mode = Provenance::Mode::Shots;
  else if (mode == "noisy") p.mode = Provenance::Mode::Noisy;
  else throw ValidationError("pair file: unknown provenance mode " + mode);
  p.n_shots = j.value("n_shots", std::int64_t{0});
  p.seed = j.value("seed", std::uint64_t{0});
  p.twirls = j.value("twirls", 0);
  p.gains = j.value("gains", std::vector<double>{});
  p.noise_model = j.value("noise_model", std::string{});
  p.n_system = j.value("n_system", 0);
  return p;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& rows) {
  const Eigen::Index d = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c)
      m(r, c) = std::complex<double>(rows.at(r).at(c).at(0).get<double>(),
                                     rows.at(r).at(c).at(1).get<double>());
  return m;
}
}  // namespace

std::string pair_to_json(const KrylovPair& pair) {
  json j;
  j["D"] = pair.D;
  j["dt"] = pair.dt;
  j["structure"] = to_string(pair.structure);
  j["provenance"] = provenance_to_json(pair.provenance);
  j["h"] = matrix_to_json(pair.H);
  j["s"] = matrix_to_json(pair.S);
  return j.dump(2) + "\n";
}

KrylovPair pair_from_json(const std::string& text) {
  json j = json::parse(text);
  KrylovPair pair;
  pair.D = j.at("D").get<int>();
  pair.dt = j.at("dt").get<double>();
  std::string st = j.at("structure").get<std::string>();
  if (st == "toeplitz") pair.structure = PairStructure::Toeplitz;
  else if (st == "hermitian") pair.structure = PairStructure::Hermitian;
  else throw ValidationError("pair file: unknown structure " + st);
  pair.provenance = provenance_from_json(j.at("provenance"));
  pair.H = matrix_from_json(j.at("h"));
  pair.S = matrix_from_json(j.at("s"));
  if (pair.H.rows() != pair.D || pair.S.rows() != pair.D)
    throw ValidationError("pair file: matrix size does not match D");
  return pair;
}

std::string noise_models_to_json(
    const std::array<PauliLindbladModel, 3>& models) {
  json layers = json::array();
  for (const auto& m : models) {
    json l;
    l["layer"] = m.layer_id;
    json gens = json::array();
    for (const auto& [p, rate] : m.generators) {
      json g;
      json sites = json::array();
      std::string letters;
      for (int q : p.support()) {
        sites.push_back(q);
        letters.push_back(pauli_char(p.op(q)));
      }
      g["sites"] = std::move(sites);
      g["pauli"] = letters;
      g["rate"] = rate;
      gens.push_back(std::move(g));
    }
    l["generators"] = std::move(gens);
    layers.push_back(std::move(l));
  }
  json j;
  j["layers"] = std::move(layers);
  return j.dump(2) + "\n";
}

std::array<PauliLindbladModel, 3> noise_models_from_json(const std::string& text,
                                                         int n_sites) {
  json j = json::parse(text);
  std::array<PauliLindbladModel, 3> models;
  for (int c = 0; c < 3; ++c)
    models[c].layer_id = std::string(1, color_char(static_cast<EdgeColor>(c)));
  for (const auto& l : j.at("layers")) {
    EdgeColor color = color_from_char(l.at("layer").get<std::string>().at(0));
    auto& model = models[static_cast<int>(color)];
    for (const auto& g : l.at("generators")) {
      PauliString p(n_sites);
      auto sites = g.at("sites").get<std::vector<int>>();
      std::string letters = g.at("pauli").get<std::string>();
      if (sites.size() != letters.size())
        throw ValidationError("noise file: sites/pauli length mismatch");
      for (std::size_t i = 0; i < sites.size(); ++i)
        p.set_op(sites[i], pauli_from_char(letters[i]));
      model.generators.emplace_back(std::move(p), g.at("rate").get<double>());
    }
    model.validate(n_sites);
  }
  return models;
}

std::string curve_csv(const EnergyCurve& curve, const BootstrapResult* bootstrap,
                      int n_sites) {
  std::ostringstream out;
  out << "D,energy,threshold,std,accepted_resamples";
  if (n_sites > 0) out << ",energy_per_site";
  out << "\n";
  for (std::size_t i = 0; i < curve.energy.size(); ++i) {
    out << (i + 1) << ",";
    out << (curve.defined[i] ? format_double(curve.energy[i]) : "") << ",";
    out << format_double(curve.threshold[i]) << ",";
    if (bootstrap && i < bootstrap->std_per_d.size())
      out << format_double(bootstrap->std_per_d[i]) << ","
          << bootstrap->accepted;
    else
      out << ",";
    if (n_sites > 0)
      out << ","
          << (curve.defined[i] ? format_double(curve.energy[i] / n_sites) : "");
    out << "\n";
  }
  return out.str();
}

std::string heatmap_csv(const std::vector<HeatmapRow>& rows) {
  std::ostringstream out;
  out << "dt,D,energy,error\n";
  for (const auto& r : rows)
    out << format_double(r.dt) << "," << r.D << "," << format_double(r.energy)
        << "," << format_double(r.error) << "\n";
  return out.str();
}

std::string compare_csv(const KrylovPair& a, const KrylovPair& b,
                        const EnergyCurve& curve_a, const EnergyCurve& curve_b) {
  if (a.D != b.D) throw ValidationError("compare: incompatible Krylov dimensions");
  double max_dh = 0, max_ds = 0;
  for (int r = 0; r < a.D; ++r)
    for (int c = 0; c < a.D; ++c) {
      max_dh = std::max(max_dh, std::abs(a.H(r, c) - b.H(r, c)));
      max_ds = std::max(max_ds, std::abs(a.S(r, c) - b.S(r, c)));
    }
  // Hamiltonian error matrices are reported per site
  int n = std::max(a.provenance.n_system, b.provenance.n_system);
  double dh_per_site = n > 0 ? max_dh / n : max_dh;

  std::ostringstream out;
  out << "D,energy_a,energy_b,energy_diff,max_abs_dh_per_site,max_abs_ds\n";
  for (int d = 0; d < a.D; ++d) {
    bool ok = curve_a.defined[d] && curve_b.defined[d];
    out << (d + 1) << ",";
    out << (curve_a.defined[d] ? format_double(curve_a.energy[d]) : "") << ",";
    out << (curve_b.defined[d] ? format_double(curve_b.energy[d]) : "") << ",";
    out << (ok ? format_double(curve_a.energy[d] - curve_b.energy[d]) : "")
        << ",";
    out << format_double(dh_per_site) << "," << format_double(max_ds) << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace kqd::io
