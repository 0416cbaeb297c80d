#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "diffent/agreement.hpp"
#include "diffent/diffraction.hpp"
#include "diffent/entanglement.hpp"
#include "diffent/error.hpp"
#include "diffent/fft.hpp"
#include "diffent/fock.hpp"
#include "diffent/io.hpp"
#include "diffent/modes.hpp"
#include "diffent/protocols.hpp"
#include "diffent/separability.hpp"

namespace diffent::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string csv;

  std::string mask;
  std::string u = "0.6,0.0";
  double k = 2.0 * kPi;
  int grid = 256;
  double dx = 0.25;
  double radius = 2.0;
  std::string basis = "hg";
  int order = 2;
  double waist = 1.0;
  std::string unitarize = "flux";

  std::string input_mode = "hg:0,0";
  std::string target_mode = "hg:1,0";
  std::string input_field;
  std::string target_field;
  double eps = 0.0;

  std::string state;
  std::string unitary;
  std::string report = "both";
  std::string subset;
  std::string method = "auto";
  int cutoff = 0;
  int photon_cap = -1;
  double truncation_tol = kDefaultTruncationTolerance;
  double entropy_tol = 0.0;
  std::string state_file;

  std::string inputs;
  double tol_couple = kCouplingTolerance;
  double tol_coeff = kCoefficientTolerance;

  std::string eta = "1";
  double theta = kPi / 2.0;
  double phi = 0.0;
  int sweep = 64;
  int photons = 2;
  int theta_steps = 256;
  int phi_steps = 256;
  bool no_refine = false;
  int trials = 100;
};

const std::vector<std::string> kUnhashed = {"--config", "--out", "--csv", "--help"};

bool is_validation(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnknownLabel:
    case ErrorCode::NonPhysical:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EmptyPartition:
    case ErrorCode::TooManyModes:
    case ErrorCode::InvalidEfficiency:
    case ErrorCode::Parse:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json canonical(const RunConfig& c) {
  return {{"command", c.command}, {"params", c.params}, {"seed", c.seed}};
}

UnitaryMatrix load_unitary(const std::string& path) {
  json j = io::read_json_file(path);
  if (j.contains("result")) j = j.at("result");
  if (j.contains("unitary")) j = j.at("unitary");
  return io::unitary_from_json(j);
}

MultimodeFockState load_state(const std::string& path) {
  json j = io::read_json_file(path);
  if (j.contains("result")) j = j.at("result");
  if (j.contains("state")) j = j.at("state");
  return io::state_from_json(j);
}

ModeLabel parse_label(const std::string& text, BasisKind& kind) {
  const auto colon = text.find(':');
  const std::string tag = text.substr(0, colon);
  if (colon == std::string::npos || (tag != "hg" && tag != "lg")) {
    throw Error(ErrorCode::Parse, "mode label '" + text + "' must look like hg:m,n or lg:p,l");
  }
  kind = tag == "hg" ? BasisKind::HermiteGaussian : BasisKind::LaguerreGaussian;
  const auto v = io::parse_doubles(text.substr(colon + 1));
  if (v.size() != 2) throw Error(ErrorCode::Parse, "mode label '" + text + "' needs two indices");
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

SampledField mode_field(const std::string& label_text, const Options& o, const Grid2D& grid) {
  BasisKind kind{};
  const ModeLabel label = parse_label(label_text, kind);
  const int order = std::abs(label.first) + std::abs(label.second);
  const ModeBasis basis = kind == BasisKind::HermiteGaussian
                              ? ModeBasis::hermite_gaussian(order, o.waist)
                              : ModeBasis::laguerre_gaussian(label.first, std::abs(label.second),
                                                             o.waist);
  return sample_field(label, basis, grid, o.k);
}

bool all_fock(const std::vector<ModeDescriptor>& d) {
  return std::all_of(d.begin(), d.end(), [](const ModeDescriptor& m) {
    return std::holds_alternative<FockInput>(m) || std::holds_alternative<VacuumInput>(m);
  });
}

json descriptor_list(const std::vector<ModeDescriptor>& d) {
  json out = json::array();
  for (const auto& m : d) out.push_back(to_string(m));
  return out;
}

struct Outcome {
  json result;
  std::string csv;
  int exit_code = kSuccess;
};

Outcome compile_mask(const Options& o) {
  const Grid2D grid = Grid2D::square(o.grid, o.dx);
  json r;
  if (o.mask == "cosine") {
    const auto u = io::parse_doubles(o.u);
    if (u.size() != 2 && u.size() != 3) {
      throw Error(ErrorCode::Parse, "--u needs 2 or 3 components");
    }
    const MaskFunction mask = MaskFunction::cosine_grating(u[0], u[1], o.k);
    const MaskSpectrum spectrum = mask_spectrum(mask, grid);
    const GratingBlock block = compile_grating_block(mask);
    r["mask"] = io::to_json(mask);
    r["grid"] = io::to_json(grid);
    r["edge_ratio"] = spectrum.edge_ratio;
    r["coupling"] = io::to_json(block.coupling);
    r["unitary"] = io::to_json(block.unitary);
    return {r, io::matrix_csv(block.unitary.matrix())};
  }
  const MaskFunction mask =
      o.mask == "pinhole" ? MaskFunction::pinhole(o.radius) : MaskFunction::circular_aperture(o.radius);
  const ModeBasis basis = o.basis == "lg" ? ModeBasis::laguerre_gaussian(o.order, o.order, o.waist)
                                          : ModeBasis::hermite_gaussian(o.order, o.waist);
  const CouplingMatrix coupling = overlap_unitary(mask, basis, basis, grid);
  const UnitaryMatrix unitary = diffent::unitarize(
      coupling, o.unitarize == "polar" ? UnitarizeMode::Polar : UnitarizeMode::FluxFaithful);
  r["mask"] = io::to_json(mask);
  r["grid"] = io::to_json(grid);
  r["coupling"] = io::to_json(coupling);
  r["unitary"] = io::to_json(unitary);
  return {r, io::matrix_csv(unitary.matrix())};
}

Outcome design_response(const Options& o) {
  const Grid2D grid = Grid2D::square(o.grid, o.dx);
  const SampledField in =
      o.input_field.empty() ? mode_field(o.input_mode, o, grid) : io::read_field_file(o.input_field);
  const SampledField target = o.target_field.empty() ? mode_field(o.target_mode, o, in.grid())
                                                     : io::read_field_file(o.target_field);
  const ImpulseResponse h = inverse_design_response(in, target, o.eps);
  const SampledField reproduced = apply_impulse_response(h, in);
  json r = io::to_json(h);
  r["round_trip_fidelity"] = overlap_fidelity(reproduced, target);
  return {r, {}};
}

Outcome propagate(const Options& o) {
  const auto descriptors = io::parse_descriptors(o.state);
  const UnitaryMatrix u = load_unitary(o.unitary);
  if (static_cast<int>(descriptors.size()) != u.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "--state has " + std::to_string(descriptors.size()) + " modes, --unitary has " +
                    std::to_string(u.dimension()));
  }
  InputStateSpec spec{descriptors, o.cutoff, o.photon_cap, o.truncation_tol};
  const MultimodeFockState in = build_input_state(spec);
  const bool exact = all_fock(descriptors);
  const bool reference = o.method == "reference" || (o.method == "auto" && exact);
  const MultimodeFockState out = reference ? apply_unitary(in, u) : apply_unitary_factored(in, u);
  const double tol =
      o.entropy_tol > 0.0 ? o.entropy_tol
                          : (exact ? kEntropyToleranceExact : kEntropyToleranceTruncated);

  json r{{"inputs", descriptor_list(descriptors)},
         {"method", reference ? "reference" : "factored"},
         {"truncation_error", in.truncation_error()}};
  Outcome outcome;
  if (o.report == "entropy" || o.report == "both") {
    json reports = json::array();
    if (!o.subset.empty()) {
      const Bipartition part(io::parse_subset_mask(o.subset, u.dimension()), u.dimension());
      const EntanglementReport rep = entanglement_report(out, part, tol);
      reports.push_back(io::to_json(part, rep));
      r["entropy_bits"] = rep.entropy_bits;
      outcome.csv = io::scan_csv({{part, rep}});
    } else {
      const auto scan = full_separability_scan(out, tol);
      for (const auto& e : scan) reports.push_back(io::to_json(e.part, e.report));
      r["fully_separable"] = fully_separable(scan);
      if (!scan.empty()) r["entropy_bits"] = scan.front().report.entropy_bits;
      outcome.csv = io::scan_csv(scan);
    }
    r["reports"] = std::move(reports);
  }
  if (o.report == "state" || o.report == "both") r["state"] = io::to_json(out);
  outcome.result = std::move(r);
  return outcome;
}

Outcome entropy(const Options& o) {
  const MultimodeFockState s = load_state(o.state_file);
  const double tol = o.entropy_tol > 0.0 ? o.entropy_tol : kEntropyToleranceTruncated;
  json reports = json::array();
  std::vector<ScanEntry> scan;
  if (!o.subset.empty()) {
    const Bipartition part(io::parse_subset_mask(o.subset, s.mode_count()), s.mode_count());
    scan.push_back({part, entanglement_report(s, part, tol)});
  } else {
    scan = full_separability_scan(s, tol);
  }
  for (const auto& e : scan) reports.push_back(io::to_json(e.part, e.report));
  json r{{"mode_count", s.mode_count()}, {"reports", std::move(reports)},
         {"fully_separable", fully_separable(scan)}};
  return {r, io::scan_csv(scan)};
}

Outcome check_separability(const Options& o) {
  const auto descriptors = io::parse_descriptors(o.inputs);
  const UnitaryMatrix u = load_unitary(o.unitary);
  const auto subset = io::parse_subset_mask(o.subset, u.dimension());
  const SeparabilityVerdict v = check_no_entanglement(BargmannInput::from_descriptors(descriptors),
                                                      u, subset, {o.tol_couple, o.tol_coeff});
  json r = io::to_json(v);
  r["inputs"] = descriptor_list(descriptors);
  r["subset"] = subset;
  return {r, {}};
}

UnitaryMatrix two_port(const Options& o) {
  return o.unitary.empty() ? su2_splitter(o.theta, o.phi) : load_unitary(o.unitary);
}

Outcome protocol_ifm(const Options& o) {
  const UnitaryMatrix block = two_port(o);
  json runs = json::array();
  std::string csv = "eta,null_probability,detected_probability,bell_fidelity\n";
  for (double eta : io::parse_doubles(o.eta)) {
    const IfmResult res = ifm_project(eta, block);
    runs.push_back(io::to_json(res));
    std::ostringstream line;
    line << std::setprecision(17) << eta << ',' << res.null_probability << ','
         << res.detected_probability << ',' << res.atoms.bell_fidelity() << '\n';
    csv += line.str();
  }
  return {{{"block", io::to_json(block)}, {"runs", std::move(runs)}}, csv};
}

Outcome protocol_hom(const Options& o) {
  const UnitaryMatrix u = two_port(o);
  json r{{"unitary", io::to_json(u)}, {"coincidence", hom_coincidence(u)}};
  std::string csv = "theta,coincidence,cos2theta\n";
  json sweep = json::array();
  for (int i = 0; i < o.sweep; ++i) {
    const double theta = o.sweep > 1 ? kPi * i / (o.sweep - 1) : 0.0;
    const double p = hom_coincidence(su2_splitter(theta, o.phi));
    const double law = std::cos(theta) * std::cos(theta);
    sweep.push_back({theta, p, law});
    std::ostringstream line;
    line << std::setprecision(17) << theta << ',' << p << ',' << law << '\n';
    csv += line.str();
  }
  r["sweep"] = std::move(sweep);
  return {r, csv};
}

Outcome scan_noon(const Options& o, bool surface) {
  ScanOptions opts{o.theta_steps, o.phi_steps, !o.no_refine, surface};
  const ScanResult s = noon_fidelity_scan(o.photons, opts);
  return {io::to_json(s), surface ? io::surface_csv(s) : std::string{}};
}

Outcome agreement_suite(const Options& o) {
  const AgreementSummary s = run_agreement_suite(o.trials, o.seed);
  Outcome out{io::to_json(s), {}};
  std::string csv = "index,modes,network,scenario,checker_separable,max_entropy_bits,agree\n";
  for (const auto& t : s.trials) {
    std::ostringstream line;
    line << std::setprecision(17) << t.index << ',' << t.modes << ',' << to_string(t.network) << ','
         << to_string(t.scenario) << ',' << t.checker.separable << ',' << t.max_entropy_bits << ','
         << t.agree << '\n';
    csv += line.str();
  }
  out.csv = std::move(csv);
  if (!s.all_agree()) out.exit_code = kNumericalFailure;
  return out;
}

// Defaults that need more than CLI11's six captured digits.
std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON file of option values; flags take precedence")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "root RNG seed, recorded in every artifact");
  sub->add_option("--out", o.out, "JSON artifact path (default: <output dir>/<command>.json)");
  sub->add_option("--csv", o.csv, "optional CSV artifact path");
}

void build_app(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  auto* c = app.add_subcommand("compile-mask", "compile a mask into a unitary network");
  add_common(c, o);
  c->add_option("--mask", o.mask, "cosine | aperture | pinhole")
      ->required()
      ->check(CLI::IsMember({"cosine", "aperture", "pinhole"}));
  c->add_option("--u", o.u, "grating direction ux,uy[,uz]");
  c->add_option("--k", o.k, "wavenumber")->default_str(exact(o.k));
  c->add_option("--grid", o.grid, "samples per axis (power of two)");
  c->add_option("--dx", o.dx, "sample spacing");
  c->add_option("--radius", o.radius, "aperture or pinhole radius");
  c->add_option("--basis", o.basis, "hg | lg")->check(CLI::IsMember({"hg", "lg"}));
  c->add_option("--order", o.order, "basis truncation order");
  c->add_option("--waist", o.waist, "basis waist");
  c->add_option("--unitarize", o.unitarize, "flux | polar")->check(CLI::IsMember({"flux", "polar"}));

  auto* d = app.add_subcommand("design-response", "inverse-design an impulse response");
  add_common(d, o);
  d->add_option("--input-mode", o.input_mode, "input mode label, hg:m,n or lg:p,l");
  d->add_option("--target-mode", o.target_mode, "target mode label");
  d->add_option("--input-field", o.input_field, "input field file")->check(CLI::ExistingFile);
  d->add_option("--target-field", o.target_field, "target field file")->check(CLI::ExistingFile);
  d->add_option("--grid", o.grid, "samples per axis");
  d->add_option("--dx", o.dx, "sample spacing");
  d->add_option("--waist", o.waist, "mode waist");
  d->add_option("--k", o.k, "wavenumber")->default_str(exact(o.k));
  d->add_option("--eps", o.eps, "regularization; 0 selects the default");

  auto* p = app.add_subcommand("propagate", "propagate a product input through a network");
  add_common(p, o);
  p->add_option("--state", o.state, "descriptors, e.g. fock:2,vac")->required();
  p->add_option("--unitary", o.unitary, "unitary JSON")->required()->check(CLI::ExistingFile);
  p->add_option("--report", o.report, "entropy | state | both")
      ->check(CLI::IsMember({"entropy", "state", "both"}));
  p->add_option("--subset", o.subset, "bipartition mask, e.g. 1,0; default scans all");
  p->add_option("--method", o.method, "auto | reference | factored")
      ->check(CLI::IsMember({"auto", "reference", "factored"}));
  p->add_option("--cutoff", o.cutoff, "per-mode Fock cutoff; 0 = automatic");
  p->add_option("--photon-cap", o.photon_cap, "total photon cap; -1 = automatic, 0 = none");
  p->add_option("--truncation-tol", o.truncation_tol, "allowed truncation loss")
      ->check(CLI::PositiveNumber);
  p->add_option("--entropy-tol", o.entropy_tol, "separability threshold in bits; 0 = automatic");

  auto* e = app.add_subcommand("entropy", "entanglement reports for a saved state");
  add_common(e, o);
  e->add_option("--state-file", o.state_file, "state JSON")->required()->check(CLI::ExistingFile);
  e->add_option("--subset", o.subset, "bipartition mask; default scans all");
  e->add_option("--entropy-tol", o.entropy_tol, "separability threshold in bits; 0 = default");

  auto* s = app.add_subcommand("check-separability", "order-by-order no-entanglement check");
  add_common(s, o);
  s->add_option("--inputs", o.inputs, "descriptors, e.g. sq:0.3,sq:0.3")->required();
  s->add_option("--unitary", o.unitary, "unitary JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--subset", o.subset, "output subset mask, e.g. 1,1")->required();
  s->add_option("--tol-couple", o.tol_couple, "coupling threshold")->check(CLI::PositiveNumber);
  s->add_option("--tol-coeff", o.tol_coeff, "coefficient threshold")->check(CLI::PositiveNumber);

  auto* f = app.add_subcommand("protocol-ifm", "interaction-free Bell projection");
  add_common(f, o);
  f->add_option("--eta", o.eta, "absorption efficiencies, comma separated");
  f->add_option("--theta", o.theta, "splitter angle when no --unitary is given")->default_str(exact(o.theta));
  f->add_option("--phi", o.phi, "splitter phase");
  f->add_option("--unitary", o.unitary, "2x2 unitary JSON")->check(CLI::ExistingFile);

  auto* h = app.add_subcommand("protocol-hom", "two-photon coincidence probability");
  add_common(h, o);
  h->add_option("--theta", o.theta, "splitter angle when no --unitary is given")->default_str(exact(o.theta));
  h->add_option("--phi", o.phi, "splitter phase");
  h->add_option("--unitary", o.unitary, "2x2 unitary JSON")->check(CLI::ExistingFile);
  h->add_option("--sweep", o.sweep, "theta sweep points over [0, pi]")->check(CLI::NonNegativeNumber);

  auto* n = app.add_subcommand("scan-noon", "best NOON fidelity from two-mode Fock inputs");
  add_common(n, o);
  n->add_option("--photons", o.photons, "total photon number")->check(CLI::PositiveNumber);
  n->add_option("--theta-steps", o.theta_steps, "theta grid steps")->check(CLI::PositiveNumber);
  n->add_option("--phi-steps", o.phi_steps, "phi grid steps")->check(CLI::PositiveNumber);
  n->add_flag("--no-refine", o.no_refine, "skip the local theta refinement");

  auto* a = app.add_subcommand("agreement-suite", "randomized checker/oracle agreement");
  add_common(a, o);
  a->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
}

// Turns the JSON config into flags placed ahead of the user's flags, so the
// TakeLast policy lets the command line win.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
  if (args.empty()) return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) return args;
  const json cfg = io::read_json_file(path);
  if (!cfg.is_object()) throw Error(ErrorCode::Parse, path + ": config must be a JSON object");
  std::vector<std::string> merged{args[0]};
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || sub->get_option_no_throw(flag) == nullptr) {
      throw Error(ErrorCode::Parse, path + ": field '" + key + "' is not an option of " + args[0]);
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back(flag);
    } else if (value.is_string()) {
      merged.push_back(flag + "=" + value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      merged.push_back(flag + "=" + joined);
    } else if (value.is_number()) {
      merged.push_back(flag + "=" + value.dump());
    } else {
      throw Error(ErrorCode::Parse, path + ": field '" + key + "' has an unsupported type");
    }
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

RunConfig resolve(const CLI::App& sub, const Options& o) {
  RunConfig c;
  c.command = sub.get_name();
  c.seed = o.seed;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (std::find(kUnhashed.begin(), kUnhashed.end(), name) != kUnhashed.end()) continue;
    if (name == "--seed") continue;
    c.params[name.substr(2)] = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
  }
  fs::path dir = ".";
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') dir = env;
  c.out = o.out.empty() ? dir / (c.command + ".json") : fs::path(o.out);
  if (!o.csv.empty()) c.csv = o.csv;
  return c;
}

Outcome dispatch(const RunConfig& c, const Options& o) {
  if (c.command == "compile-mask") return compile_mask(o);
  if (c.command == "design-response") return design_response(o);
  if (c.command == "propagate") return propagate(o);
  if (c.command == "entropy") return entropy(o);
  if (c.command == "check-separability") return check_separability(o);
  if (c.command == "protocol-ifm") return protocol_ifm(o);
  if (c.command == "protocol-hom") return protocol_hom(o);
  if (c.command == "scan-noon") return scan_noon(o, !c.csv.empty());
  if (c.command == "agreement-suite") return agreement_suite(o);
  throw Error(ErrorCode::InvalidArgument, "unknown command " + c.command);
}

}  // namespace

std::string config_hash(const RunConfig& config) { return fnv1a_hex(canonical(config).dump()); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Diffraction-generated modal entanglement toolkit", "diffent"};
  app.set_version_flag("--version", DIFFENT_VERSION);
  build_app(app, o);

  std::vector<std::string> merged;
  try {
    merged = merge_config(args, app);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  std::vector<std::string> reversed(merged.rbegin(), merged.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << DIFFENT_VERSION << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << '\n' << sub->help();
    return kValidationFailure;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const RunConfig config = resolve(*sub, o);
  try {
    Outcome outcome = dispatch(config, o);
    json artifact{{"tool", "diffent"},
                  {"version", DIFFENT_VERSION},
                  {"schema_version", io::kSchemaVersion},
                  {"command", config.command},
                  {"config_hash", config_hash(config)},
                  {"seed", config.seed},
                  {"config", config.params},
                  {"result", std::move(outcome.result)}};
    io::write_text_atomic(config.out, artifact.dump(2) + "\n");
    out << config.command << ": wrote " << config.out.string() << '\n';
    if (!config.csv.empty() && !outcome.csv.empty()) {
      std::string csv = "# diffent " + std::string(DIFFENT_VERSION) + " config_hash " +
                        config_hash(config) + " seed " + std::to_string(config.seed) + "\n" +
                        outcome.csv;
      io::write_text_atomic(config.csv, csv);
      out << config.command << ": wrote " << config.csv.string() << '\n';
    }
    if (outcome.exit_code != kSuccess) {
      err << "error: " << config.command << " reported a failed check; see " << config.out.string()
          << '\n';
    }
    return outcome.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation(e.code()) ? kValidationFailure : kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace diffent::cli
