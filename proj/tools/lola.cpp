#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lola/bench_gen.hpp"
#include "lola/evaluator.hpp"
#include "lola/parser.hpp"
#include "lola/pipeline.hpp"
#include "lola/trace_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kIo = 2;
constexpr int kFault = 3;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_diagnostics(const lola::Diagnostics& diags, const std::string& source, const std::string& path) {
  lola::SourceMap map(source);
  for (const auto& d : diags) std::cerr << map.render(d, path) << "\n";
}

int cmd_check(const std::string& path, bool timing) {
  auto source = slurp(path);
  if (!source) {
    std::cerr << "error: cannot read " << path << "\n";
    return kIo;
  }
  lola::Analysis a = lola::analyze(*source);
  print_diagnostics(a.diagnostics, *source, path);
  if (timing) {
    double total = 0;
    for (const auto& t : a.timings) {
      std::cout << std::left << std::setw(16) << t.phase << std::fixed << std::setprecision(3) << t.milliseconds
                << " ms\n";
      total += t.milliseconds;
    }
    std::cout << std::left << std::setw(16) << "total" << std::fixed << std::setprecision(3) << total << " ms\n";
  }
  return a.ok() ? kOk : kRejected;
}

struct MonitorArgs {
  std::string spec;
  std::string trace;
  std::string format = "csv";
  std::string out;
  std::string end_time;
  bool dump = false;
  bool unchecked = false;
};

int cmd_monitor(const MonitorArgs& args) {
  auto source = slurp(args.spec);
  if (!source) {
    std::cerr << "error: cannot read " << args.spec << "\n";
    return kIo;
  }
  lola::Analysis a = lola::analyze(*source);
  if (!a.ok()) {
    print_diagnostics(a.diagnostics, *source, args.spec);
    if (!args.unchecked || !a.spec) return kRejected;
    std::cerr << "warning: static checks bypassed\n";
  }
  lola::MonitorOptions options;
  options.dump = args.dump;
  if (!args.end_time.empty()) {
    auto t = lola::Rational::parse_decimal(args.end_time);
    if (!t) {
      std::cerr << "error: invalid end time '" << args.end_time << "'\n";
      return kIo;
    }
    options.end_time = t;
  }
  lola::Trace trace;
  try {
    trace = lola::read_csv_trace(std::filesystem::path(args.trace), *a.spec, a.values.streams);
  } catch (const lola::TraceError& e) {
    std::cerr << args.trace << ":" << e.row() + 1 << ":" << e.column() << ": " << lola::trace_error_name(e.kind())
              << ": " << e.what() << "\n";
    return kIo;
  }
  lola::MonitorReport report;
  try {
    report = lola::run(a, trace, options);
  } catch (const lola::MonitorError& e) {
    std::cerr << "monitor fault: " << lola::monitor_error_name(e.kind()) << ": " << e.what();
    if (e.span().end > e.span().begin) {
      auto pos = lola::SourceMap(*source).position(e.span().begin);
      std::cerr << " (" << args.spec << ":" << pos.line << ":" << pos.column << ")";
    }
    std::cerr << "\n";
    return kFault;
  }
  auto format = args.format == "json" ? lola::ReportFormat::Json : lola::ReportFormat::Csv;
  if (args.out.empty()) {
    lola::write_report(std::cout, report, format, args.dump);
    return kOk;
  }
  std::ofstream out(args.out);
  if (!out) {
    std::cerr << "error: cannot write " << args.out << "\n";
    return kIo;
  }
  lola::write_report(out, report, format, args.dump);
  return out ? kOk : kIo;
}

int cmd_bench(const std::string& kind_name, std::size_t n, std::size_t reps, const std::string& emit) {
  auto kind = lola::bench_kind_from_name(kind_name);
  std::string source = lola::generate(*kind, n);
  if (!emit.empty()) {
    std::ofstream out(emit);
    if (!(out << source)) {
      std::cerr << "error: cannot write " << emit << "\n";
      return kIo;
    }
  }
  std::vector<double> samples;
  for (std::size_t r = 0; r < std::max<std::size_t>(reps, 1); ++r) {
    auto start = std::chrono::steady_clock::now();
    lola::Analysis a = lola::analyze(source);
    samples.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    if (!a.ok()) {
      print_diagnostics(a.diagnostics, source, std::string(lola::bench_kind_name(*kind)));
      return kRejected;
    }
  }
  std::sort(samples.begin(), samples.end());
  double median = samples.size() % 2 ? samples[samples.size() / 2]
                                     : (samples[samples.size() / 2 - 1] + samples[samples.size() / 2]) / 2;
  std::cout << lola::bench_kind_name(*kind) << " n=" << n << " accepted median " << std::fixed << std::setprecision(3)
            << median << " ms over " << samples.size() << " runs\n";
  return kOk;
}

int cmd_graph(const std::string& path, const std::string& dot) {
  auto source = slurp(path);
  if (!source) {
    std::cerr << "error: cannot read " << path << "\n";
    return kIo;
  }
  lola::ParseResult parsed = lola::parse(*source);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, *source, path);
    return kRejected;
  }
  lola::DesugarResult desugared = lola::desugar(parsed.spec);
  if (!desugared.spec) {
    print_diagnostics(desugared.diagnostics, *source, path);
    return kRejected;
  }
  std::ofstream out(dot);
  if (!(out << lola::to_dot(lola::build_graph(*desugared.spec)))) {
    std::cerr << "error: cannot write " << dot << "\n";
    return kIo;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static checker and monitor for parameterized stream specifications"};
  app.require_subcommand(1);

  std::string check_spec;
  bool timing = false;
  auto* check = app.add_subcommand("check", "Run all static checks on a specification");
  check->add_option("spec", check_spec, "Specification file")->required();
  check->add_flag("--timing", timing, "Print the time spent in each phase");

  MonitorArgs margs;
  auto* monitor = app.add_subcommand("monitor", "Run a specification over a CSV trace");
  monitor->add_option("spec", margs.spec, "Specification file")->required();
  monitor->add_option("trace", margs.trace, "CSV trace file")->required();
  monitor->add_option("--format", margs.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  monitor->add_option("--out", margs.out, "Write the report to this file instead of stdout");
  monitor->add_option("--end-time", margs.end_time, "Last time point to process (default: last event)");
  monitor->add_flag("--dump", margs.dump, "Report every output evaluation, not only triggers");
  monitor->add_flag("--unchecked", margs.unchecked, "Run even if static checks fail")->group("");

  std::string bench_kind;
  std::size_t bench_n = 1;
  std::size_t reps = 10;
  std::string emit;
  auto* bench = app.add_subcommand("bench", "Generate a benchmark specification and time its analysis");
  bench->add_option("kind", bench_kind, "sync, param or conjunct")
      ->required()
      ->check(CLI::IsMember({"sync", "param", "conjunct", "SyncChain", "ParamChain", "ConjunctChain"}));
  bench->add_option("n", bench_n, "Number of streams")->required()->check(CLI::PositiveNumber);
  bench->add_option("--reps", reps, "Number of timed analyses")->check(CLI::PositiveNumber);
  bench->add_option("--emit", emit, "Also write the generated specification to this file");

  std::string graph_spec;
  std::string dot;
  auto* graph = app.add_subcommand("graph", "Write the dependency graph in DOT format");
  graph->add_option("spec", graph_spec, "Specification file")->required();
  graph->add_option("--dot", dot, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kIo;
  }

  if (*check) return cmd_check(check_spec, timing);
  if (*monitor) return cmd_monitor(margs);
  if (*bench) return cmd_bench(bench_kind, bench_n, reps, emit);
  if (*graph) return cmd_graph(graph_spec, dot);
  return kIo;
}
