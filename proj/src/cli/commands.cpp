#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"

#include "format.hpp"
#include "parallel.hpp"
#include "qvdp/bifurcation.hpp"
#include "qvdp/compactify.hpp"
#include "qvdp/detect.hpp"
#include "qvdp/equilibria.hpp"
#include "qvdp/error.hpp"
#include "qvdp/integrate.hpp"
#include "svg.hpp"

namespace qvdp::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kPortraitEscape = 10.0;
constexpr double kPortraitTol = 1e-10;
constexpr double kForcedTol = 1e-11;
constexpr int kSeriesPerPeriod = 20;

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw UsageError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

ordered_json params_json(const Params& p) {
  ordered_json j;
  j["mu"] = p.mu();
  j["beta"] = p.beta();
  j["eps"] = p.eps();
  j["alpha"] = p.alpha();
  j["omega"] = p.omega();
  return j;
}

ordered_json complex_json(std::complex<double> z) { return ordered_json::array({z.real(), z.imag()}); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::optional<CriticalMus> maybe_critical(const Params& p) {
  if (!p.three_equilibria()) return std::nullopt;
  return critical_mus(p);
}

std::optional<double> maybe_mu3(const Params& p) {
  if (!p.three_equilibria()) return std::nullopt;
  return homoclinic_curve(p.beta(), p.eps());
}

std::vector<State> default_seeds(const Params& p) {
  std::vector<State> seeds;
  constexpr double kPi = 3.14159265358979323846;
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * kPi * k / 8.0 + kPi / 8.0;
    seeds.push_back({2.0 * std::cos(a), 2.0 * std::sin(a)});
  }
  for (const auto& e : find_equilibria(p)) {
    seeds.push_back(e.location + State{0.05, 0.05});
    seeds.push_back(e.location - State{0.05, 0.05});
  }
  return seeds;
}

std::string status_reason(Status s) {
  switch (s) {
    case Status::NonFinite: return "escaped beyond |s| = 10";
    case Status::StepUnderflow: return "step size underflow";
    case Status::Stopped: return "stopped";
    case Status::Success: return "ok";
  }
  return "unknown";
}

std::string seed_text(State s) { return format_number(s.x) + "," + format_number(s.y); }

std::string kind_color(EqKind k) {
  switch (k) {
    case EqKind::Saddle: return "#444";
    case EqKind::StableNode:
    case EqKind::StableFocus: return "#1a7f37";
    default: return "#cf222e";
  }
}

struct SeedRun {
  Trajectory traj;
  std::optional<std::string> error;
};

Format format_or(const RunConfig& cfg, Format fallback) { return cfg.format.value_or(fallback); }

}  // namespace

double GridAxis::at(int i) const noexcept {
  if (i == count - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

Params RunConfig::params() const { return {mu, beta, eps, alpha, omega}; }

GridAxis parse_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4) throw UsageError("grid must be AXIS:MIN:MAX:N, got '" + std::string(spec) + "'");
  GridAxis g;
  g.name = std::string(parts[0]);
  if (g.name != "mu" && g.name != "beta" && g.name != "eps") {
    throw UsageError("grid axis must be mu, beta or eps, got '" + g.name + "'");
  }
  g.min = parse_double(parts[1], "grid minimum");
  g.max = parse_double(parts[2], "grid maximum");
  int n = 0;
  const auto res = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), n);
  if (parts[3].empty() || res.ec != std::errc() || res.ptr != parts[3].data() + parts[3].size()) {
    throw UsageError("malformed grid count '" + std::string(parts[3]) + "'");
  }
  if (n < 2) throw UsageError("grid count must be at least 2");
  if (!(g.max > g.min)) throw UsageError("grid maximum must exceed minimum");
  g.count = n;
  return g;
}

State parse_seed(std::string_view spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 2) throw UsageError("seed must be x,y, got '" + std::string(spec) + "'");
  return {parse_double(parts[0], "seed x"), parse_double(parts[1], "seed y")};
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "svg") return Format::Svg;
  throw UsageError("format must be csv, json or svg, got '" + std::string(name) + "'");
}

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Classify: return "classify";
    case Command::Portrait: return "portrait";
    case Command::Sweep: return "sweep";
    case Command::Melnikov: return "melnikov";
    case Command::Hopf: return "hopf";
    case Command::Forced: return "forced";
    case Command::Repro: return "repro";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

CommandResult cmd_classify(const RunConfig& cfg) {
  if (format_or(cfg, Format::Json) != Format::Json) throw UsageError("classify writes json only");
  const Params p = cfg.params();

  ordered_json j;
  j["params"] = params_json(p);
  ordered_json eqs = ordered_json::array();
  for (const auto& e : find_equilibria(p)) {
    ordered_json je;
    je["label"] = to_string(e.label);
    je["x"] = e.location.x;
    je["y"] = e.location.y;
    je["eigenvalues"] = ordered_json::array({complex_json(e.eigs[0]), complex_json(e.eigs[1])});
    je["kind"] = to_string(e.kind);
    eqs.push_back(je);
  }
  j["equilibria"] = eqs;
  if (const auto cm = maybe_critical(p)) {
    j["critical_mus"] = {{"mu1", cm->mu1}, {"muc", cm->muc}, {"mu2", cm->mu2}};
  } else {
    j["critical_mus"] = nullptr;
  }
  if (const auto m3 = maybe_mu3(p)) {
    j["mu3"] = *m3;
  } else {
    j["mu3"] = nullptr;
  }
  const RegionLabel region = classify_region(p);
  j["region_label"] = to_string(region.label);
  j["regime"] = region.regime == '-' ? ordered_json(nullptr) : ordered_json(std::string(1, region.regime));
  j["homoclinic_proximal"] = region.homoclinic_proximal;
  j["certificates"] = region.certificates;
  ordered_json inf = ordered_json::array();
  for (const auto& e : infinity_equilibria(p)) {
    inf.push_back({{"label", to_string(e.label)},
                   {"x", e.disk_location.x},
                   {"y", e.disk_location.y},
                   {"kind", to_string(e.kind)}});
  }
  j["infinity"] = inf;

  CommandResult r;
  r.artifacts.push_back({cfg.out.value_or(""), dump(j)});
  return r;
}

// ---------------------------------------------------------------------------

CommandResult cmd_portrait(const RunConfig& cfg) {
  const Format fmt = format_or(cfg, Format::Csv);
  if (fmt == Format::Json) throw UsageError("portrait writes csv or svg");
  if (!(cfg.t1 > cfg.t0)) throw UsageError("t1 must exceed t0");
  const Params p = cfg.params();
  const double tol = cfg.tol.value_or(kPortraitTol);
  const std::vector<State> seeds = cfg.seeds.empty() ? default_seeds(p) : cfg.seeds;

  PlanarField field;
  if (p.forced()) {
    field = [p](double t, State s) { return field_forced(s, t, p); };
  } else {
    field = [p](double, State s) { return field_unforced(s, p); };
  }
  IntegratorOptions opt;
  opt.escape_radius = kPortraitEscape;

  const auto runs = parallel_map<SeedRun>(seeds.size(), [&](std::size_t i) {
    SeedRun run;
    try {
      run.traj = integrate(field, seeds[i], {cfg.t0, cfg.t1}, {tol, tol}, opt);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidParams) throw;
      run.error = e.what();
    }
    return run;
  });

  CommandResult r;
  std::string csv = "seed_id,t,x,y\n";
  std::size_t failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    if (run.error) {
      ++failed;
      r.warnings.push_back("seed " + std::to_string(i) + " (" + seed_text(seeds[i]) + "): " + *run.error);
      continue;
    }
    if (run.traj.status == Status::StepUnderflow) ++failed;
    if (run.traj.status != Status::Success) {
      r.warnings.push_back("seed " + std::to_string(i) + " (" + seed_text(seeds[i]) +
                           "): " + status_reason(run.traj.status) + " at t = " +
                           format_number(run.traj.samples.back().t));
    }
    const std::string id = std::to_string(i);
    for (const auto& smp : run.traj.samples) {
      append_row(csv, {id, format_number(smp.t), format_number(smp.s.x), format_number(smp.s.y)});
    }
  }
  if (failed == runs.size()) r.exit_code = 3;

  if (fmt == Format::Csv) {
    r.artifacts.push_back({cfg.out.value_or(""), csv});
    return r;
  }

  const auto place = [&](State s) { return cfg.disk ? 2.9 * disk_project(s) : s; };
  SvgCanvas svg;
  if (cfg.disk) svg.circle({0.0, 0.0}, 2.9, "#000", "none", 0.015);
  const char* palette[] = {"#0969da", "#8250df", "#bf3989", "#9a6700", "#1f883d", "#bc4c00", "#6e7781", "#0550ae"};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].error) continue;
    std::vector<State> pts;
    pts.reserve(runs[i].traj.samples.size());
    for (const auto& smp : runs[i].traj.samples) pts.push_back(place(smp.s));
    svg.polyline(pts, palette[i % 8]);
  }
  if (!p.forced()) {
    std::vector<LimitCycle> cycles;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].error || !runs[i].traj.ok()) continue;
      try {
        auto c = find_limit_cycle(p, runs[i].traj.final_state());
        if (!c) continue;
        const bool seen = std::any_of(cycles.begin(), cycles.end(), [&](const LimitCycle& o) {
          return std::abs(o.representative.x - c->representative.x) < 1e-6;
        });
        if (!seen) cycles.push_back(std::move(*c));
      } catch (const Error&) {
      }
    }
    for (const auto& c : cycles) {
      std::vector<State> pts;
      for (const auto& s : c.orbit) pts.push_back(place(s));
      if (!pts.empty()) pts.push_back(pts.front());
      svg.polyline(pts, c.stable ? "#000" : "#cf222e", 0.03);
    }
  }
  for (const auto& e : find_equilibria(p)) {
    const State at = place(e.location);
    if (e.kind == EqKind::Saddle) {
      svg.square(at, 0.05, kind_color(e.kind));
    } else if (is_unstable(e.kind)) {
      svg.circle(at, 0.05, kind_color(e.kind), "white", 0.02);
    } else {
      svg.circle(at, 0.05, kind_color(e.kind), kind_color(e.kind));
    }
    svg.text(at + State{0.07, 0.07}, std::string(to_string(e.label)));
  }
  if (cfg.out) {
    r.artifacts.push_back({*cfg.out, svg.str()});
    r.artifacts.push_back({path_stem(*cfg.out) + ".csv", csv});
  } else {
    r.artifacts.push_back({"", svg.str()});
  }
  return r;
}

// ---------------------------------------------------------------------------

CommandResult cmd_sweep(const RunConfig& cfg) {
  if (format_or(cfg, Format::Csv) != Format::Csv) throw UsageError("sweep writes csv only");
  if (cfg.grid.empty()) throw UsageError("sweep needs at least one --grid axis");
  for (std::size_t a = 0; a < cfg.grid.size(); ++a) {
    for (std::size_t b = a + 1; b < cfg.grid.size(); ++b) {
      if (cfg.grid[a].name == cfg.grid[b].name) throw UsageError("grid axis '" + cfg.grid[a].name + "' repeated");
    }
  }
  std::size_t total = 1;
  for (const auto& g : cfg.grid) total *= static_cast<std::size_t>(g.count);

  const auto rows = parallel_map<std::string>(total, [&](std::size_t idx) {
    double vals[3] = {cfg.mu, cfg.beta, cfg.eps};
    std::size_t rest = idx;
    for (std::size_t a = cfg.grid.size(); a-- > 0;) {
      const auto& g = cfg.grid[a];
      const int i = static_cast<int>(rest % static_cast<std::size_t>(g.count));
      rest /= static_cast<std::size_t>(g.count);
      const int slot = g.name == "mu" ? 0 : (g.name == "beta" ? 1 : 2);
      vals[slot] = g.at(i);
    }
    std::vector<std::string> f = {format_number(vals[1]), format_number(vals[0]), format_number(vals[2])};
    try {
      const Params p(vals[0], vals[1], vals[2]);
      f.emplace_back(to_string(classify_region(p).label));
      if (const auto cm = maybe_critical(p)) {
        f.push_back(format_number(cm->mu1));
        f.push_back(format_number(cm->muc));
        f.push_back(format_number(cm->mu2));
      } else {
        f.insert(f.end(), 3, "");
      }
      const auto m3 = maybe_mu3(p);
      f.push_back(m3 ? format_number(*m3) : "");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidParams) throw;
      f.emplace_back("invalid");
      f.insert(f.end(), 4, "");
    }
    std::string row;
    append_row(row, f);
    return row;
  });

  std::string csv = "beta,mu,eps,region,mu1,muc,mu2,mu3\n";
  for (const auto& row : rows) csv += row;
  CommandResult r;
  r.artifacts.push_back({cfg.out.value_or(""), csv});
  return r;
}

// ---------------------------------------------------------------------------

CommandResult cmd_melnikov(const RunConfig& cfg) {
  if (format_or(cfg, Format::Json) != Format::Json) throw UsageError("melnikov writes json only");
  const Params p = cfg.params();
  if (p.beta() <= 0.0 || p.eps() <= 0.0) throw Error(ErrorCode::Domain, "melnikov needs beta > 0 and eps > 0");
  const MelnikovComparison m = melnikov_compare(p.mu(), p.beta(), p.eps(), cfg.eps1);

  ordered_json j;
  j["params"] = {{"mu", p.mu()}, {"beta", p.beta()}, {"eps", p.eps()}, {"eps1", cfg.eps1}};
  j["closed_form"] = m.closed_form;
  j["quadrature"] = m.quadrature;
  j["mu3"] = m.mu3;
  j["relative_diff"] = m.relative_diff;

  CommandResult r;
  r.artifacts.push_back({cfg.out.value_or(""), dump(j)});
  if (!(m.relative_diff < 1e-6)) {
    r.warnings.push_back("closed form and quadrature disagree: relative_diff = " + format_number(m.relative_diff));
    r.exit_code = 3;
  }
  return r;
}

// ---------------------------------------------------------------------------

CommandResult cmd_hopf(const RunConfig& cfg) {
  if (format_or(cfg, Format::Json) != Format::Json) throw UsageError("hopf writes json only");
  const Params p = cfg.params();
  const HopfData h = hopf_normal_form(p);
  const CriticalMus cm = critical_mus(p);
  const HopfCyclePrediction pred = hopf_cycle_prediction(p);
  const ForcedReduction fr = forced_reduction(p.beta(), p.eps(), p.mu() - cm.muc);

  ordered_json j;
  j["params"] = params_json(p);
  j["critical_mus"] = {{"mu1", cm.mu1}, {"muc", cm.muc}, {"mu2", cm.mu2}};
  j["lambda"] = complex_json(h.lambda);
  ordered_json g;
  for (const auto& [kl, v] : h.g) g[std::to_string(kl.first) + std::to_string(kl.second)] = complex_json(v);
  j["g"] = g;
  j["c1"] = complex_json(h.c1);
  j["c1_critical"] = complex_json(h.c1_critical);
  j["l1"] = h.l1;
  j["ddelta_dmu"] = h.ddelta_dmu;
  j["alpha"] = h.alpha;
  j["e1"] = h.e1;
  j["l1_alpha"] = h.l1_alpha;
  j["cycle_prediction"] = {{"exists", pred.exists},
                           {"radius", pred.radius},
                           {"z_modulus", pred.z_modulus},
                           {"x_amplitude", pred.x_amplitude},
                           {"y_amplitude", pred.y_amplitude}};
  j["forced_reduction"] = {{"xi", fr.xi},         {"re_lambda", fr.re_lambda}, {"im_lambda", fr.im_lambda},
                           {"c1", complex_json(fr.c1)}, {"rho0", fr.rho0},   {"h1", fr.h1},
                           {"w1", fr.w1}};

  CommandResult r;
  r.artifacts.push_back({cfg.out.value_or(""), dump(j)});
  return r;
}

// ---------------------------------------------------------------------------

namespace {

ordered_json evidence_json(const AttractorEvidence& e) {
  ordered_json j;
  j["samples"] = e.samples;
  j["transient"] = e.transient;
  j["tail_step"] = e.tail_step;
  j["revisit_period"] = e.revisit_period;
  j["revisit_distance"] = e.revisit_distance;
  j["centroid"] = {e.centroid.x, e.centroid.y};
  j["monotone_winding"] = e.monotone_winding;
  j["closure_residual"] = e.closure_residual;
  j["max_angle_gap"] = e.max_angle_gap;
  j["gap_ratio"] = e.gap_ratio;
  j["chord_ratio"] = e.chord_ratio;
  j["rotation_error"] = e.rotation_error;
  j["periodic_residual"] = e.periodic_residual;
  return j;
}

}  // namespace

CommandResult cmd_forced(const RunConfig& cfg) {
  if (format_or(cfg, Format::Json) == Format::Svg) throw UsageError("forced writes csv and json");
  const Params p = cfg.params();
  if (!p.forced()) throw UsageError("forced needs a nonzero --alpha");
  const double tol = cfg.tol.value_or(kForcedTol);
  const std::vector<State> seeds = cfg.seeds.empty() ? std::vector<State>{{0.0, 1.2}} : cfg.seeds;
  const std::string stem = cfg.out ? path_stem(*cfg.out) : "forced";

  struct ForcedRun {
    StroboscopicRun strobe;
    std::optional<AttractorReport> report;
    std::optional<std::string> error;
  };
  const auto runs = parallel_map<ForcedRun>(seeds.size(), [&](std::size_t i) {
    ForcedRun run;
    try {
      run.strobe = stroboscopic(p, seeds[i], cfg.periods, {tol, tol}, true);
      run.report = classify_samples(p, run.strobe.samples);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidParams) throw;
      run.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    return run;
  });

  CommandResult r;
  ordered_json j;
  j["params"] = params_json(p);
  j["periods"] = cfg.periods;
  j["verdict"] = nullptr;
  j["rotation_number"] = nullptr;
  ordered_json list = ordered_json::array();
  std::size_t failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    ordered_json jr;
    jr["seed_id"] = i;
    jr["seed"] = {seeds[i].x, seeds[i].y};
    const std::string suffix = seeds.size() > 1 ? "_seed" + std::to_string(i) : "";
    if (run.error) {
      ++failed;
      jr["error"] = *run.error;
      r.warnings.push_back("seed " + std::to_string(i) + " (" + seed_text(seeds[i]) + "): " + *run.error);
      list.push_back(jr);
      continue;
    }
    jr["verdict"] = to_string(run.report->verdict);
    jr["rotation_number"] =
        run.report->rotation_number ? ordered_json(*run.report->rotation_number) : ordered_json(nullptr);
    jr["evidence"] = evidence_json(run.report->evidence);
    if (j["verdict"].is_null()) {
      j["verdict"] = jr["verdict"];
      j["rotation_number"] = jr["rotation_number"];
    }
    list.push_back(jr);

    const double period = p.period();
    std::string strobe = "k,t,x,y\n";
    for (std::size_t k = 0; k < run.strobe.samples.size(); ++k) {
      const State s = run.strobe.samples[k];
      append_row(strobe, {std::to_string(k), format_number(static_cast<double>(k) * period), format_number(s.x),
                          format_number(s.y)});
    }
    std::string ts = "t,x,y\n";
    const double spacing = period / kSeriesPerPeriod;
    double next = 0.0;
    for (const auto& smp : run.strobe.series) {
      if (smp.t < next) continue;
      append_row(ts, {format_number(smp.t), format_number(smp.s.x), format_number(smp.s.y)});
      while (next <= smp.t) next += spacing;
    }
    r.artifacts.push_back({stem + suffix + ".csv", std::move(strobe)});
    r.artifacts.push_back({stem + suffix + "_ts.csv", std::move(ts)});
  }
  j["runs"] = list;
  const std::string doc = dump(j);
  r.artifacts.push_back({stem + ".json", doc});
  r.artifacts.push_back({"", doc});
  if (failed == runs.size()) r.exit_code = 3;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct Example {
  int id;
  double eps;
  double beta;
  double mu;
};

constexpr Example kExamples[] = {
    {1, 2.0, 0.0, 0.0}, {2, 2.0, 0.0, 1.0},    {3, 2.0, 1.0, -0.25},
    {4, 2.0, 1.0, -0.2}, {5, 2.0, 1.0, -0.171}, {6, 2.0, 1.0, -0.1},
};

void absorb(CommandResult& into, CommandResult&& from, const std::string& tag) {
  for (auto& a : from.artifacts) {
    if (!a.path.empty()) into.artifacts.push_back(std::move(a));
  }
  for (auto& w : from.warnings) into.warnings.push_back(tag + ": " + w);
  if (from.exit_code != 0) into.exit_code = from.exit_code;
}

}  // namespace

CommandResult cmd_repro(const RunConfig& cfg) {
  const std::filesystem::path dir = cfg.out.value_or("repro");
  CommandResult r;
  ordered_json summary;
  summary["directory"] = dir.string();
  ordered_json examples = ordered_json::array();

  for (const auto& ex : kExamples) {
    RunConfig c;
    c.mu = ex.mu;
    c.beta = ex.beta;
    c.eps = ex.eps;
    c.t1 = 60.0;
    const std::string base = (dir / ("example" + std::to_string(ex.id))).string();

    c.out = base + "_classify.json";
    auto cls = cmd_classify(c);
    const auto cj = ordered_json::parse(cls.artifacts.front().content);
    absorb(r, std::move(cls), "example " + std::to_string(ex.id));

    c.out = base + "_portrait.svg";
    c.format = Format::Svg;
    absorb(r, cmd_portrait(c), "example " + std::to_string(ex.id));
    c.format.reset();

    ordered_json e;
    e["example"] = ex.id;
    e["params"] = cj["params"];
    e["region_label"] = cj["region_label"];
    e["regime"] = cj["regime"];
    ordered_json kinds;
    for (const auto& q : cj["equilibria"]) kinds[q["label"].get<std::string>()] = q["kind"];
    e["equilibria"] = kinds;

    const Params p = c.params();
    if (ex.id <= 2) {
      if (auto lc = find_limit_cycle(p, {1.0, 0.0})) {
        e["cycle"] = {{"period", lc->period}, {"amplitude", lc->amplitude}, {"floquet", lc->floquet}};
      }
    }
    if (ex.id == 4 || ex.id == 6) {
      const State seed = ex.id == 4 ? State{0.9617, 0.0} : State{1.2, 0.0};
      if (auto lc = find_limit_cycle(p, seed)) {
        std::vector<std::string> enc;
        for (auto l : lc->encloses) enc.emplace_back(to_string(l));
        e["cycle"] = {{"period", lc->period}, {"amplitude", lc->amplitude}, {"floquet", lc->floquet},
                      {"encloses", enc}};
      }
    }
    if (ex.id == 4) {
      c.out = base + "_hopf.json";
      absorb(r, cmd_hopf(c), "example 4");
    }
    if (ex.id == 5) {
      c.out = base + "_melnikov.json";
      auto mel = cmd_melnikov(c);
      const auto mj = ordered_json::parse(mel.artifacts.front().content);
      e["mu3"] = mj["mu3"];
      e["separatrix_root"] = separatrix_root(p.beta(), p.eps(), -0.19, -0.15);
      absorb(r, std::move(mel), "example 5");
    }
    examples.push_back(e);
  }
  summary["examples"] = examples;

  ordered_json forced = ordered_json::array();
  for (const double mu : {-0.3, -0.1}) {
    RunConfig c;
    c.mu = mu;
    c.beta = 1.0;
    c.eps = 3.0;
    c.alpha = -0.3;
    c.omega = 1.0;
    c.seeds = {{0.0, 1.2}};
    const std::string tag = mu < -0.2 ? "forced_mu-0.3" : "forced_mu-0.1";
    c.out = (dir / (tag + ".json")).string();
    auto fr = cmd_forced(c);
    const auto fj = ordered_json::parse(fr.artifacts.back().content);
    forced.push_back({{"mu", mu}, {"verdict", fj["verdict"]}, {"rotation_number", fj["rotation_number"]}});
    absorb(r, std::move(fr), tag);
  }
  summary["forced"] = forced;

  RunConfig sw;
  sw.eps = 1.0;
  sw.grid = {GridAxis{"beta", 0.0, 2.0, 81}, GridAxis{"mu", -1.5, 2.5, 81}};
  sw.out = (dir / "sweep_eps1.csv").string();
  absorb(r, cmd_sweep(sw), "sweep");

  const std::string doc = dump(summary);
  r.artifacts.push_back({(dir / "summary.json").string(), doc});
  r.artifacts.push_back({"", doc});
  return r;
}

// ---------------------------------------------------------------------------

CommandResult run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Classify: return cmd_classify(cfg);
    case Command::Portrait: return cmd_portrait(cfg);
    case Command::Sweep: return cmd_sweep(cfg);
    case Command::Melnikov: return cmd_melnikov(cfg);
    case Command::Hopf: return cmd_hopf(cfg);
    case Command::Forced: return cmd_forced(cfg);
    case Command::Repro: return cmd_repro(cfg);
  }
  throw UsageError("unknown command");
}

void emit(const CommandResult& result) {
  for (const auto& a : result.artifacts) {
    if (a.path.empty()) {
      std::cout << a.content;
      continue;
    }
    const std::filesystem::path path(a.path);
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.path);
    f << a.content;
    if (!f) throw UsageError("failed writing " + a.path);
  }
  std::cout.flush();
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const UsageError*>(&e)) return 2;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return err->code() == ErrorCode::InvalidParams || err->code() == ErrorCode::Domain ? 2 : 3;
  }
  return 3;
}

}  // namespace qvdp::cli
