#include "diffent/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "diffent/error.hpp"

namespace diffent::io {
namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw Error(ErrorCode::Parse, "cannot read " + what + " from '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::Parse, "cannot read " + what + " from '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void require_kind(const json& j, const std::string& kind) {
  if (!j.is_object() || !j.contains("kind") || j.at("kind") != kind) {
    throw Error(ErrorCode::Parse, "expected a '" + kind + "' document");
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

}  // namespace

void write_field(std::ostream& os, const SampledField& field) {
  const Grid2D& g = field.grid();
  os << kFieldMagic << '\n'
     << g.nx() << ' ' << g.ny() << ' ' << g17(g.dx()) << ' ' << g17(g.dy()) << ' '
     << g17(field.wavenumber()) << '\n';
  for (const cd& v : field.values()) os << g17(v.real()) << ' ' << g17(v.imag()) << '\n';
}

SampledField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kFieldMagic) {
    throw Error(ErrorCode::Parse, "missing field magic '" + std::string(kFieldMagic) + "'");
  }
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double k = 0.0;
  if (!(is >> nx >> ny >> dx >> dy >> k)) throw Error(ErrorCode::Parse, "bad field header");
  Grid2D grid(nx, ny, dx, dy);
  ComplexVector values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double re = 0.0;
    double im = 0.0;
    if (!(is >> re >> im)) {
      throw Error(ErrorCode::Parse, "field truncated at sample " + std::to_string(i));
    }
    values[i] = {re, im};
  }
  return SampledField(grid, std::move(values), k);
}

void write_field_file(const std::filesystem::path& path, const SampledField& field) {
  std::ostringstream os;
  write_field(os, field);
  write_text_atomic(path, os.str());
}

SampledField read_field_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_field(is);
}

json matrix_to_json(const MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXcd matrix_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::Parse, "matrix must be a nonempty array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const json& row = j.at(r);
      if (static_cast<Eigen::Index>(row.size()) != cols) {
        throw Error(ErrorCode::Parse, "ragged matrix row " + std::to_string(r));
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = {row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>()};
      }
    }
    return m;
  });
}

json to_json(const Grid2D& g) {
  return {{"nx", g.nx()}, {"ny", g.ny()}, {"dx", g.dx()}, {"dy", g.dy()}};
}

json to_json(const Provenance& p) {
  return {{"element", p.element}, {"grid", p.grid}, {"basis", p.basis},
          {"truncation", p.truncation}, {"scale", p.scale}};
}

json to_json(const MaskFunction& m) {
  return std::visit(
      [&m](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        json j{{"kind", m.kind_name()}};
        if constexpr (std::is_same_v<T, CosineGrating>) {
          j["u"] = {k.u[0], k.u[1], k.u[2]};
          j["wavenumber"] = k.wavenumber;
          j["amplitude"] = k.amplitude;
        } else if constexpr (std::is_same_v<T, CircularAperture> || std::is_same_v<T, Pinhole>) {
          j["radius"] = k.radius;
        } else {
          j["grid"] = to_json(k.grid);
          json values = json::array();
          for (const cd& v : k.values) values.push_back({v.real(), v.imag()});
          j["values"] = std::move(values);
        }
        return j;
      },
      m.kind());
}

json to_json(const UnitaryMatrix& u) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "unitary"},
          {"convention", "row j lists the outputs of input mode j"},
          {"dimension", u.dimension()},
          {"unitarity_residual", u.unitarity_residual()},
          {"unitarization_distance", u.unitarization_distance()},
          {"ancilla_modes", u.ancilla_modes()},
          {"entries", matrix_to_json(u.matrix())}};
}

json to_json(const CouplingMatrix& c) {
  json norms = json::array();
  for (double n : c.captured_norms()) norms.push_back(n);
  return {{"schema_version", kSchemaVersion},
          {"kind", "coupling"},
          {"outputs", c.outputs()},
          {"inputs", c.inputs()},
          {"provenance", to_json(c.provenance())},
          {"captured_norms", std::move(norms)},
          {"truncation_loss", c.truncation_loss()},
          {"entries", matrix_to_json(c.values())}};
}

json to_json(const MultimodeFockState& s) {
  json amps = json::array();
  for (const auto& [occ, a] : s.amplitudes()) amps.push_back({occ, a.real(), a.imag()});
  return {{"schema_version", kSchemaVersion},
          {"kind", "fock-state"},
          {"mode_count", s.mode_count()},
          {"prune_threshold", s.prune_threshold()},
          {"truncation_error", s.truncation_error()},
          {"amplitudes", std::move(amps)}};
}

json to_json(const Bipartition& part, const EntanglementReport& r, int top_k) {
  json schmidt = json::array();
  for (int i = 0; i < std::min<int>(top_k, static_cast<int>(r.schmidt_coefficients.size())); ++i) {
    schmidt.push_back(r.schmidt_coefficients[i]);
  }
  return {{"bipartition", part.mask_string()},
          {"entropy_bits", r.entropy_bits},
          {"separable", r.separable},
          {"tolerance", r.tolerance},
          {"schmidt_rank", r.schmidt_coefficients.size()},
          {"schmidt_top", std::move(schmidt)}};
}

json to_json(const SeparabilityVerdict& v) {
  json j{{"separable", v.separable}, {"coupled_modes", v.coupled_modes}};
  if (v.witness) {
    const Witness& w = *v.witness;
    j["witness"] = {{"order", w.order},
                    {"input_mode", w.input_mode},
                    {"output_mode", w.output_mode},
                    {"other_output_mode", w.other_output_mode},
                    {"residual", w.residual},
                    {"description", w.description}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const GaussianState& g) {
  json mean = json::array();
  for (Eigen::Index i = 0; i < g.mean.size(); ++i) mean.push_back(g.mean(i));
  json cov = json::array();
  for (Eigen::Index i = 0; i < g.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < g.covariance.cols(); ++j) row.push_back(g.covariance(i, j));
    cov.push_back(std::move(row));
  }
  return {{"ordering", "x1..xN,p1..pN"}, {"mean", std::move(mean)}, {"covariance", std::move(cov)}};
}

json to_json(const IfmResult& r) {
  json amps = json::array();
  for (const cd& a : r.atoms.amplitudes) amps.push_back({a.real(), a.imag()});
  return {{"efficiency", r.atoms.efficiency},
          {"basis", {"gg", "ge", "eg", "ee"}},
          {"atom_amplitudes", std::move(amps)},
          {"bell_fidelity", r.atoms.bell_fidelity()},
          {"null_probability", r.null_probability},
          {"detected_probability", r.detected_probability}};
}

json to_json(const ScanResult& r) {
  return {{"photons", r.photons},
          {"best_fidelity", r.best_fidelity},
          {"grid_best_fidelity", r.grid_best_fidelity},
          {"best_input", {r.best_m, r.photons - r.best_m}},
          {"best_theta", r.best_theta},
          {"best_phi", r.best_phi},
          {"theta_steps", r.theta_steps},
          {"phi_steps", r.phi_steps},
          {"refined", r.refined}};
}

json to_json(const ImpulseResponse& h) {
  json kernel = json::array();
  for (const cd& v : h.kernel) kernel.push_back({v.real(), v.imag()});
  return {{"schema_version", kSchemaVersion},
          {"kind", "impulse-response"},
          {"grid", to_json(h.grid)},
          {"regularization", h.regularization},
          {"spectral_cap", h.spectral_cap},
          {"lost_fraction", h.lost_fraction},
          {"kernel", std::move(kernel)}};
}

json to_json(const TrialOutcome& t) {
  json inputs = json::array();
  for (const auto& d : t.inputs) inputs.push_back(to_string(d));
  return {{"index", t.index},
          {"seed", t.seed},
          {"attempts", t.attempts},
          {"modes", t.modes},
          {"network", to_string(t.network)},
          {"scenario", to_string(t.scenario)},
          {"inputs", std::move(inputs)},
          {"subset", t.subset},
          {"checker", to_json(t.checker)},
          {"max_entropy_bits", t.max_entropy_bits},
          {"fock_separable", t.fock_separable},
          {"gaussian_checked", t.gaussian_checked},
          {"gaussian_separable", t.gaussian_separable},
          {"agree", t.agree}};
}

json to_json(const AgreementSummary& s) {
  json trials = json::array();
  for (const auto& t : s.trials) trials.push_back(to_json(t));
  return {{"root_seed", s.root_seed},
          {"trial_count", s.trials.size()},
          {"agreements", s.agreements},
          {"gaussian_trials", s.gaussian_trials},
          {"all_agree", s.all_agree()},
          {"trials", std::move(trials)}};
}

UnitaryMatrix unitary_from_json(const json& j) {
  return guarded([&] {
    if (j.is_object() && j.value("kind", "") == "coupling") {
      return UnitaryMatrix(matrix_from_json(j.at("entries")).transpose());
    }
    require_kind(j, "unitary");
    const MatrixXcd m = matrix_from_json(j.at("entries"));
    if (m.rows() != m.cols()) throw Error(ErrorCode::Parse, "unitary entries must be square");
    return with_unitarization_record(UnitaryMatrix(m), j.value("unitarization_distance", 0.0),
                                     j.value("ancilla_modes", 0));
  });
}

CouplingMatrix coupling_from_json(const json& j) {
  return guarded([&] {
    require_kind(j, "coupling");
    Provenance p;
    if (j.contains("provenance")) {
      const json& q = j.at("provenance");
      p.element = q.value("element", "");
      p.grid = q.value("grid", "");
      p.basis = q.value("basis", "");
      p.truncation = q.value("truncation", 0);
      p.scale = q.value("scale", 1.0);
    }
    return CouplingMatrix(matrix_from_json(j.at("entries")), p);
  });
}

MultimodeFockState state_from_json(const json& j) {
  return guarded([&] {
    require_kind(j, "fock-state");
    MultimodeFockState s(j.at("mode_count").get<int>(),
                         j.value("prune_threshold", kDefaultPruneThreshold));
    for (const json& e : j.at("amplitudes")) {
      s.set(e.at(0).get<Occupation>(), {e.at(1).get<double>(), e.at(2).get<double>()});
    }
    s.set_truncation_error(j.value("truncation_error", 0.0));
    return s;
  });
}

std::string matrix_csv(const MatrixXcd& m) {
  std::string out = "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + g17(m(i, j).real()) + ',' +
             g17(m(i, j).imag()) + '\n';
    }
  }
  return out;
}

std::string scan_csv(const std::vector<ScanEntry>& scan, int top_k) {
  std::string out = "mask,entropy_bits,separable";
  for (int i = 0; i < top_k; ++i) out += ",schmidt_" + std::to_string(i);
  out += '\n';
  for (const auto& e : scan) {
    out += e.part.mask_string() + ',' + g17(e.report.entropy_bits) + ',' +
           (e.report.separable ? "true" : "false");
    for (int i = 0; i < top_k; ++i) {
      const auto& s = e.report.schmidt_coefficients;
      out += ',' + (i < static_cast<int>(s.size()) ? g17(s[i]) : std::string("0"));
    }
    out += '\n';
  }
  return out;
}

std::string surface_csv(const ScanResult& r) {
  std::string out = "theta,phi,fidelity\n";
  for (const auto& p : r.surface) {
    out += g17(p.theta) + ',' + g17(p.phi) + ',' + g17(p.fidelity) + '\n';
  }
  return out;
}

ModeDescriptor parse_descriptor(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& tag = parts[0];
  if ((tag == "vac" || tag == "vacuum") && parts.size() == 1) return VacuumInput{};
  if (tag == "fock" && parts.size() == 2) {
    const int n = to_int(parts[1], "Fock number");
    if (n < 0) throw Error(ErrorCode::NonPhysical, "negative Fock number in '" + text + "'");
    return FockInput{n};
  }
  if (tag == "coh" && (parts.size() == 2 || parts.size() == 3)) {
    const double re = to_double(parts[1], "coherent amplitude");
    const double im = parts.size() == 3 ? to_double(parts[2], "coherent amplitude") : 0.0;
    return CoherentInput{{re, im}};
  }
  if (tag == "sq" && parts.size() == 2) return SqueezedVacuumInput{to_double(parts[1], "squeezing")};
  throw Error(ErrorCode::Parse, "unknown mode descriptor '" + text + "'");
}

std::vector<ModeDescriptor> parse_descriptors(const std::string& text) {
  std::vector<ModeDescriptor> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_descriptor(item));
  return out;
}

std::vector<int> parse_subset_mask(const std::string& text, int mode_count) {
  const auto parts = split(text, ',');
  if (mode_count >= 0 && static_cast<int>(parts.size()) != mode_count) {
    throw Error(ErrorCode::Parse, "subset mask '" + text + "' needs " + std::to_string(mode_count) +
                                      " entries");
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] == "1") {
      out.push_back(static_cast<int>(i));
    } else if (parts[i] != "0") {
      throw Error(ErrorCode::Parse, "subset mask entries must be 0 or 1, got '" + parts[i] + "'");
    }
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item, "number"));
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace diffent::io
