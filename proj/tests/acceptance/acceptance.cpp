#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "lola/bench_gen.hpp"
#include "lola/evaluator.hpp"
#include "lola/trace_io.hpp"
#include "oracle.hpp"

namespace {

using namespace lola;
using lola::testing::analyze_file;
using lola::testing::read_file;
using lola::testing::spec_dir;

struct Outcome {
  bool pass = true;
  std::string detail;
};

const char* kCorpus[] = {"intruder", "waypoint", "watchdog", "rcc", "ffd", "geofence"};

Outcome corpus_accepted() {
  Outcome o;
  int accepted = 0;
  for (const char* name : kCorpus) {
    Analysis a = analyze_file(spec_dir() / "corpus" / (std::string(name) + ".lola"));
    if (a.ok()) {
      ++accepted;
    } else {
      o.pass = false;
      o.detail += std::string(" rejected:") + name;
    }
  }
  o.detail = std::to_string(accepted) + "/6 accepted" + o.detail;
  return o;
}

struct Expected {
  const char* file;
  DiagCode code;
  std::vector<std::pair<std::size_t, std::size_t>> positions;
};

Outcome negatives_rejected() {
  const std::vector<Expected> cases = {
      {"sync_global_from_event", DiagCode::PacingMismatch, {{3, 17}}},
      {"global_local", DiagCode::PacingMismatch, {{3, 44}}},
      {"parameter_equality", DiagCode::ParameterMismatch, {{6, 17}}},
      {"motivating", DiagCode::LocalSyncViolation, {{16, 21}, {16, 54}}},
  };
  Outcome o;
  int good = 0;
  for (const auto& c : cases) {
    std::string source = read_file(spec_dir() / "negative" / (std::string(c.file) + ".lola"));
    Analysis a = analyze(source);
    SourceMap map(source);
    std::vector<std::pair<std::size_t, std::size_t>> found;
    for (const auto& d : a.diagnostics) {
      if (d.severity != Severity::Error) continue;
      auto p = map.position(d.span.begin);
      found.emplace_back(d.code == c.code ? p.line : 0, p.column);
    }
    if (!a.ok() && found == c.positions) {
      ++good;
    } else {
      o.pass = false;
      o.detail += std::string(" mismatch:") + c.file;
    }
  }
  o.detail = std::to_string(good) + "/4 rejected at the expected access" + o.detail;
  return o;
}

bool acceptable(const DependencyGraph& g, const std::vector<std::size_t>& cycle) {
  bool has_close = false;
  bool all_with = true;
  bool delayed = false;
  for (std::size_t i : cycle) {
    const DependencyEdge& e = g.edges[i];
    has_close |= e.location == Location::Close;
    all_with &= e.location == Location::EvalWith;
    delayed |= e.access.kind == AccessLabel::Kind::Offset && e.access.offset > 0;
  }
  return has_close || (all_with && delayed);
}

// Calls `f` with every simple cycle, given as edge indices starting at its
// smallest vertex.
void simple_cycles(const DependencyGraph& g, const std::function<void(const std::vector<std::size_t>&)>& f) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t start, std::size_t v) {
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const DependencyEdge& e = g.edges[i];
      if (e.source != v || e.target < start) continue;
      path.push_back(i);
      if (e.target == start) {
        f(path);
      } else if (!on_path[e.target]) {
        on_path[e.target] = true;
        walk(start, e.target);
        on_path[e.target] = false;
      }
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    on_path[s] = true;
    walk(s, s);
    on_path[s] = false;
  }
}

bool accepted_source(const std::string& source) {
  Analysis a = analyze(source);
  return a.ok();
}

Outcome wellformedness_matches_enumeration() {
  Outcome named;
  if (accepted_source("input x: Int\noutput a := a + x")) named.detail += " zero-offset self-cycle accepted;";
  if (!accepted_source("input x: Int\noutput a := a.offset(by: -1).defaults(to: 0) + x")) {
    named.detail += " offset-1 self-cycle rejected;";
  }
  if (!accepted_source("input x: Int\noutput a(p) spawn with x eval with p + x close when a(p) > 2")) {
    named.detail += " close-broken cycle rejected;";
  }
  std::mt19937_64 rng(20240611);
  const int graphs = 20000;
  int agree = 0;
  int rejected = 0;
  Outcome o;
  for (int k = 0; k < graphs; ++k) {
    DependencyGraph g;
    std::size_t n = 1 + rng() % 4;
    for (std::size_t v = 0; v < n; ++v) g.names.push_back("s" + std::to_string(v));
    std::size_t m = rng() % 7;
    for (std::size_t i = 0; i < m; ++i) {
      DependencyEdge e;
      e.source = static_cast<std::uint32_t>(rng() % n);
      e.target = static_cast<std::uint32_t>(rng() % n);
      e.location = static_cast<Location>(rng() % 4);
      e.access.kind = static_cast<AccessLabel::Kind>(rng() % 4);
      if (e.access.kind == AccessLabel::Kind::Offset) e.access.offset = static_cast<std::uint32_t>(rng() % 3);
      if (e.access.kind == AccessLabel::Kind::Aggr) e.access.duration = Rational(1);
      g.edges.push_back(e);
    }
    bool expected = true;
    simple_cycles(g, [&](const std::vector<std::size_t>& c) { expected = expected && acceptable(g, c); });
    auto reported = check_wellformed(g);
    bool witnesses_ok = true;
    for (const auto& c : reported.empty() ? std::vector<CycleDiagnostic>{} : reported) {
      for (std::size_t i = 0; i < c.edges.size(); ++i) {
        const auto& a = g.edges[c.edges[i]];
        const auto& b = g.edges[c.edges[(i + 1) % c.edges.size()]];
        witnesses_ok &= a.target == b.source;
      }
      witnesses_ok &= !c.edges.empty() && !acceptable(g, c.edges) && !cycle_is_acceptable(g, c.edges);
    }
    if (expected == reported.empty() && witnesses_ok) ++agree;
    rejected += !expected;
  }
  o.pass = agree == graphs && named.detail.empty();
  o.detail = named.detail + std::to_string(agree) + "/" + std::to_string(graphs) + " random multigraphs agree (" +
             std::to_string(rejected) + " ill-formed)";
  return o;
}

std::vector<PacingType> pacing_universe() {
  std::vector<PacingType> u = {PacingType::top(), PacingType::periodic(), PacingType::bottom()};
  using C = ActivationFormula::Clause;
  std::vector<std::vector<C>> formulas = {
      {{0}}, {{1}}, {{2}}, {{0, 1}}, {{0}, {1}}, {{0, 1, 2}}, {{0}, {1}, {2}}, {{0, 1}, {2}}, {{0, 2}, {1, 2}},
      {{0, 1}, {0, 2}, {1, 2}}};
  for (auto& f : formulas) u.push_back(PacingType::event(ActivationFormula::from_clauses(f)));
  for (Rational p : {Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 5)}) {
    u.push_back(PacingType::global(p));
    u.push_back(PacingType::local(p));
  }
  return u;
}

// Bottom occurs only at the root; nested occurrences collapse under meet.
std::vector<ValueType> value_universe() {
  std::vector<ValueType> leaves = {ValueType::top(), ValueType::boolean(), ValueType::string(),
                                   ValueType::integer(8), ValueType::integer(64), ValueType::uint(16),
                                   ValueType::floating(32), ValueType::floating(64)};
  std::vector<ValueType> depth2 = leaves;
  for (const auto& a : leaves) depth2.push_back(ValueType::option(a));
  for (std::size_t i = 0; i < leaves.size(); i += 3) {
    for (std::size_t j = 1; j < leaves.size(); j += 2) depth2.push_back(ValueType::tuple({leaves[i], leaves[j]}));
  }
  std::vector<ValueType> u = depth2;
  u.push_back(ValueType::bottom());
  u.push_back(ValueType::unit());
  for (std::size_t i = 8; i < depth2.size(); i += 3) {
    u.push_back(ValueType::option(depth2[i]));
    u.push_back(ValueType::tuple({depth2[i], ValueType::integer(8)}));
    u.push_back(ValueType::tuple({depth2[i], ValueType::top()}));
  }
  return u;
}

std::vector<SemanticType> semantic_universe() {
  std::vector<SemanticType> u = {SemanticType::top(), SemanticType::bottom()};
  const std::vector<std::string> atoms = {"a", "b", "c", "d"};
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<std::string> keys;
    for (unsigned i = 0; i < 4; ++i) {
      if (mask & (1u << i)) keys.push_back(atoms[i]);
    }
    u.push_back(SemanticType::from_keys(keys));
  }
  return u;
}

// Checks partial-order laws, that meet is the greatest lower bound and,
// when given, that join is the least upper bound over the closure of `u`.
template <typename T>
int lattice_violations(std::vector<T> u, const std::function<bool(const T&, const T&)>& le,
                       const std::function<T(const T&, const T&)>& meet,
                       const std::function<T(const T&, const T&)>& join, std::size_t& checked) {
  for (std::size_t i = 0, n = u.size(); i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<T> derived = {meet(u[i], u[j])};
      if (join) derived.push_back(join(u[i], u[j]));
      for (const T& x : derived) {
        if (std::find(u.begin(), u.end(), x) == u.end()) u.push_back(x);
      }
    }
  }
  int bad = 0;
  for (const T& a : u) {
    bad += !le(a, a);
    for (const T& b : u) {
      if (le(a, b) && le(b, a) && !(a == b)) ++bad;
      for (const T& c : u) {
        if (le(a, b) && le(b, c) && !le(a, c)) ++bad;
      }
      T m = meet(a, b);
      bad += !le(m, a) || !le(m, b) || !(m == meet(b, a));
      for (const T& c : u) {
        if (le(c, a) && le(c, b) && !le(c, m)) ++bad;
        ++checked;
      }
      if (!join) continue;
      T j = join(a, b);
      bad += !le(a, j) || !le(b, j) || !(j == join(b, a));
      for (const T& c : u) {
        if (le(a, c) && le(b, c) && !le(j, c)) ++bad;
      }
    }
  }
  return bad;
}

Outcome lattice_laws() {
  std::size_t checked_vt = 0;
  std::size_t checked_pt = 0;
  std::size_t checked_st = 0;
  int bad_vt = lattice_violations<ValueType>(value_universe(), vt_more_concrete, vt_meet, nullptr, checked_vt);
  int bad_pt = lattice_violations<PacingType>(pacing_universe(), pt_le, pt_meet, pt_join, checked_pt);
  int bad_st = lattice_violations<SemanticType>(semantic_universe(), st_le, st_meet, st_join, checked_st);
  Outcome o;
  o.pass = bad_vt == 0 && bad_pt == 0 && bad_st == 0;
  o.detail = "violations: value " + std::to_string(bad_vt) + "/" + std::to_string(checked_vt) + ", pacing " +
             std::to_string(bad_pt) + "/" + std::to_string(checked_pt) + ", semantic " + std::to_string(bad_st) +
             "/" + std::to_string(checked_st) + " triples";
  return o;
}

Outcome runtime_safety() {
  const int seeds = 1000;
  int runs = 0;
  int rejected = 0;
  int faults = 0;
  std::string first;
  for (int s = 0; s < seeds; ++s) {
    Analysis a = analyze(random_welltyped(static_cast<std::uint64_t>(s), 6));
    if (!a.ok()) {
      ++rejected;
      continue;
    }
    for (int t = 0; t < 10; ++t) {
      Trace trace = random_trace(*a.spec, a.values, static_cast<std::uint64_t>(s) * 100 + t, 100);
      try {
        run(a, trace);
        ++runs;
      } catch (const MonitorError& e) {
        if (e.kind() == MonitorErrorKind::SyncAccessFailure && faults++ == 0) {
          first = " first: seed " + std::to_string(s) + " " + e.what();
        } else if (e.kind() != MonitorErrorKind::SyncAccessFailure) {
          ++runs;
        }
      }
    }
  }
  Outcome o;
  o.pass = faults == 0 && rejected == 0;
  o.detail = std::to_string(runs) + " runs of 100 events, " + std::to_string(faults) + " sync access failures, " +
             std::to_string(rejected) + " generated specs rejected" + first;
  return o;
}

Outcome determinism() {
  int checked = 0;
  int differ = 0;
  auto compare = [&](const Analysis& a, const Trace& trace) {
    MonitorOptions options;
    options.dump = true;
    MonitorReport first = run(a, trace, options);
    MonitorReport second = run(a, trace, options);
    options.tie_break = TieBreak::Reversed;
    MonitorReport reversed = run(a, trace, options);
    ++checked;
    if (!(first == second) || !(first == reversed)) ++differ;
  };
  for (const char* name : kCorpus) {
    Analysis a = analyze_file(spec_dir() / "corpus" / (std::string(name) + ".lola"));
    for (std::uint64_t t = 0; t < 20; ++t) compare(a, random_trace(*a.spec, a.values, t, 200, 20));
  }
  for (std::uint64_t s = 0; s < 300; ++s) {
    Analysis a = analyze(random_welltyped(s + 5000, 6));
    if (a.ok()) compare(a, random_trace(*a.spec, a.values, s, 100));
  }
  Outcome o;
  o.pass = differ == 0;
  o.detail = std::to_string(checked - differ) + "/" + std::to_string(checked) +
             " reports identical across repeated and reordered runs";
  return o;
}

Outcome oracle_equivalence() {
  int compared = 0;
  int mismatches = 0;
  std::size_t rows = 0;
  std::string first;
  for (std::uint64_t s = 0; compared < 400 && s < 5000; ++s) {
    Analysis a = analyze(random_welltyped(s + 90000, 4));
    if (!a.ok()) continue;
    Trace trace = random_trace(*a.spec, a.values, s, 20, 3);
    bool same = false;
    std::string why;
    try {
      auto expected = oracle::oracle_run(*a.spec, a.values, a.pacing, trace, 20);
      if (!expected.last_time) continue;
      MonitorOptions options;
      options.dump = true;
      options.end_time = expected.last_time;
      MonitorReport actual = run(a, trace, options);
      same = actual == expected.report;
      rows += expected.report.dump.size();
      if (!same) why = "reports differ";
    } catch (const std::exception& e) {
      why = e.what();
    }
    ++compared;
    if (!same && mismatches++ == 0) first = " first: seed " + std::to_string(s + 90000) + " " + why;
  }
  Outcome o;
  o.pass = mismatches == 0 && compared >= 200;
  o.detail = std::to_string(compared - mismatches) + "/" + std::to_string(compared) + " specs agree over " +
             std::to_string(rows) + " evaluations" + first;
  return o;
}

double time_analysis(const std::string& source, int reps) {
  std::vector<double> samples;
  for (int r = 0; r < reps; ++r) {
    auto start = std::chrono::steady_clock::now();
    Analysis a = analyze(source);
    samples.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (!a.ok()) return -1;
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

Outcome scaling() {
  Outcome o;
  std::ostringstream detail;
  detail.precision(3);
  for (BenchKind kind : {BenchKind::SyncChain, BenchKind::ParamChain, BenchKind::ConjunctChain}) {
    std::vector<double> t;
    for (std::size_t n : {25, 50, 100}) t.push_back(time_analysis(generate(kind, n), 3));
    bool accepted = std::all_of(t.begin(), t.end(), [](double x) { return x >= 0; });
    bool fast = accepted && std::all_of(t.begin(), t.end(), [](double x) { return x < 60; });
    // Growth exponent between n = 25 and n = 100, with a 1 ms floor.
    double exponent = accepted ? std::log(std::max(t[2], 1e-3) / std::max(t[0], 1e-3)) / std::log(4.0) : 99;
    o.pass &= fast && exponent <= 4;
    detail << bench_kind_name(kind) << " " << t[0] << "/" << t[1] << "/" << t[2] << "s exponent " << exponent << "; ";
  }
  double geofence = time_analysis(read_file(spec_dir() / "corpus" / "geofence.lola"), 3);
  o.pass &= geofence >= 0 && geofence < 5;
  detail << "geofence " << geofence << "s";
  o.detail = detail.str();
  return o;
}

Outcome hand_traces() {
  Outcome o;
  int good = 0;
  {
    Analysis a = analyze_file(spec_dir() / "corpus" / "watchdog.lola");
    Trace trace = read_csv_trace(spec_dir() / "traces" / "watchdog.csv", *a.spec, a.values.streams);
    MonitorOptions options;
    options.dump = true;
    options.end_time = Rational(60);
    MonitorReport r = run(a, trace, options);
    const std::int64_t node = 1;
    std::vector<ReportRow> expected = {{Rational(30), *a.spec->find("pong_of_node"), {Value(node)}, Value(true)},
                                       {Rational(60), *a.spec->find("is_alive"), {Value(node)}, Value(true)}};
    Monitor m(*a.spec, a.values, a.pacing);
    m.step(Rational(0), trace[0].values);
    m.step(Rational(30), trace[1].values);
    m.step(Rational(60), {});
    bool closed = m.instances(*a.spec->find("is_alive")).empty();
    if (r.dump == expected && closed) ++good;
    else o.detail += " watchdog differs";
  }
  {
    Analysis a = analyze_file(spec_dir() / "corpus" / "waypoint.lola");
    Trace trace = read_csv_trace(spec_dir() / "traces" / "waypoint.csv", *a.spec, a.values.streams);
    MonitorOptions options;
    options.dump = true;
    MonitorReport r = run(a, trace, options);
    Tuple key = {Value(10.0), Value(0.0)};
    StreamId dist = *a.spec->find("waypoint_distance");
    StreamId appr = *a.spec->find("waypoint_approaching");
    StreamId reached = *a.spec->find("waypoint_reached");
    std::vector<ReportRow> expected;
    const double distances[] = {10.0, 6.0, 3.0};
    for (int t = 0; t < 3; ++t) {
      expected.push_back({Rational(t), dist, key, Value(distances[t])});
      expected.push_back({Rational(t), appr, key, Value(t > 0)});
      expected.push_back({Rational(t), reached, key, Value(t == 2)});
    }
    if (r.dump == expected) ++good;
    else o.detail += " waypoint differs";
  }
  o.pass = good == 2;
  o.detail = std::to_string(good) + "/2 traces match" + o.detail;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {"corpus specifications accepted", corpus_accepted},
      {"negative specifications rejected", negatives_rejected},
      {"well-formedness matches cycle enumeration", wellformedness_matches_enumeration},
      {"value, pacing and semantic lattice laws", lattice_laws},
      {"no sync access failures on well-typed specs", runtime_safety},
      {"deterministic reports", determinism},
      {"monitor agrees with reference oracle", oracle_equivalence},
      {"analysis scales polynomially", scaling},
      {"hand-checked traces", hand_traces},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << index++ << " [" << (o.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << o.detail
              << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
