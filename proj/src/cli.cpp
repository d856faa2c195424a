#include "quasitame/cli.hpp"

#include "quasitame/dsl.hpp"
#include "quasitame/error.hpp"
#include "quasitame/linalg.hpp"
#include "quasitame/oracle.hpp"
#include "quasitame/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace quasitame {

namespace {

struct Options {
  std::string path;
  std::string report_path;
  bool json = false;
  std::optional<std::size_t> horizon;
  std::uint64_t max_order = oracle::kDefaultSweepOrder;
};

struct Unreadable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Unreadable("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int classify_cmd(const Options &o, bool explain, std::ostream &out) {
  const auto t0 = std::chrono::steady_clock::now();
  const GroupExpr e = parse(read_file(o.path));
  Report r = analyze(e, {explain, o.horizon});
  r.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out << (o.json ? to_json(r) : to_text(r));
  return kExitOk;
}

int check_cmd(const Options &o, std::ostream &out, std::ostream &err) {
  const GroupExpr e = parse(read_file(o.path));
  const Report r = report_from_json(read_file(o.report_path));
  const auto problems = check_report(e, r);
  if (!problems.empty()) {
    for (const auto &p : problems) err << "mismatch: " << p << "\n";
    return kExitMismatch;
  }
  out << "valid " << (r.has_certificate() ? "certificate" : "witness") << "\n";
  return kExitOk;
}

int oracle_cmd(const Options &o, std::ostream &out, std::ostream &err) {
  const oracle::SweepSummary s = oracle::sweep(o.max_order);
  std::string text;
  if (o.json) {
    nlohmann::json mm = nlohmann::json::array();
    for (const auto &m : s.mismatches)
      mm.push_back({{"group", m.group}, {"column", m.column}, {"symbolic", m.symbolic},
                    {"enumerated", m.enumerated}});
    text = nlohmann::json{{"max_order", s.max_order}, {"groups", s.groups},
                          {"comparisons", s.comparisons}, {"mismatches", mm}}
               .dump(2) + "\n";
  } else {
    text = "max order: " + std::to_string(s.max_order) + "\ngroups: " + std::to_string(s.groups) +
           "\ncomparisons: " + std::to_string(s.comparisons) +
           "\nmismatches: " + std::to_string(s.mismatches.size()) + "\n";
  }
  if (!s.mismatches.empty()) {
    for (const auto &m : s.mismatches)
      err << m.group << " " << m.column << ": symbolic " << m.symbolic << ", enumerated "
          << m.enumerated << "\n";
    out << text;
    return kExitMismatch;
  }
  out << text;
  return kExitOk;
}

int snf_cmd(const Options &o, std::ostream &out) {
  const IntMatrix a = IntMatrix::parse(read_file(o.path));
  const SnfResult r = snf(a);
  if (!(r.U * a * r.V == r.S)) throw Error(ErrorKind::Internal, "U*A*V != S");
  if (o.json) {
    auto m = [](const IntMatrix &x) {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < x.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < x.cols(); ++j) row.push_back(x(i, j).get_str());
        rows.push_back(row);
      }
      return rows;
    };
    out << nlohmann::json{{"U", m(r.U)}, {"S", m(r.S)}, {"V", m(r.V)}}.dump(2) << "\n";
  } else {
    out << "U:\n" << r.U.str() << "S:\n" << r.S.str() << "V:\n" << r.V.str();
  }
  return kExitOk;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Tameness of products and inverse limits of countable abelian groups", "quasitame"};
  app.require_subcommand(1);
  Options o;
  std::size_t horizon = 0;

  auto *classify = app.add_subcommand("classify", "classify a .qcg or .invsys input");
  auto *explain = app.add_subcommand("explain", "classify with an expanded trace");
  for (auto *sub : {classify, explain}) {
    sub->add_option("input", o.path, "input file")->required();
    sub->add_flag("--json", o.json, "JSON report");
    sub->add_option("--horizon-override", horizon, "rank horizon for inverse systems");
  }
  auto *check = app.add_subcommand("check-witness", "re-validate a JSON report");
  check->add_option("input", o.path, "input file")->required();
  check->add_option("report", o.report_path, "report file")->required();
  auto *orc = app.add_subcommand("oracle", "compare symbolic and enumerated invariants");
  orc->add_option("--max-order", o.max_order, "largest group order");
  orc->add_flag("--json", o.json, "JSON summary");
  auto *snf_sub = app.add_subcommand("snf", "Smith normal form of a matrix file");
  snf_sub->add_option("input", o.path, "matrix file")->required();
  snf_sub->add_flag("--json", o.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << e.what() << "\n";
    return kExitInput;
  }
  for (auto *sub : {classify, explain})
    if (sub->count("--horizon-override")) o.horizon = horizon;

  // Buffer stdout so nothing reaches it on an error path.
  std::ostringstream buf;
  int code = kExitInternal;
  try {
    if (*classify) code = classify_cmd(o, false, buf);
    else if (*explain) code = classify_cmd(o, true, buf);
    else if (*check) code = check_cmd(o, buf, err);
    else if (*orc) code = oracle_cmd(o, buf, err);
    else code = snf_cmd(o, buf);
  } catch (const Error &e) {
    err << (o.path.empty() ? "" : o.path + ": ") << e.what() << "\n";
    switch (e.kind()) {
    case ErrorKind::InconclusiveHorizon: return kExitInconclusive;
    case ErrorKind::Internal: return kExitInternal;
    default: return kExitInput;
    }
  } catch (const Unreadable &e) {
    err << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  out << buf.str();
  return code;
}

} // namespace quasitame
