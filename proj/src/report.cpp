#include "quasitame/report.hpp"

#include "quasitame/error.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace quasitame {

using nlohmann::json;

const char *to_string(InputFormat f) {
  switch (f) {
  case InputFormat::Product: return "product";
  case InputFormat::InvSys: return "invsys";
  case InputFormat::Discrete: return "discrete";
  }
  return "?";
}

InputFormat format_of(const GroupExpr &e) {
  if (std::holds_alternative<SequenceSpec>(e)) return InputFormat::Product;
  if (std::holds_alternative<InverseSystem>(e)) return InputFormat::InvSys;
  return InputFormat::Discrete;
}

SequenceSpec discrete_as_product(const GroupDescriptor &g) {
  SequenceSpec s;
  s.prefix = {g};
  s.tail = {EntryTemplate()};
  return s;
}

Report analyze(const GroupExpr &e, const AnalyzeOptions &opts) {
  Report r;
  r.format = format_of(e);
  r.input = pretty(e);
  if (const auto *s = std::get_if<InverseSystem>(&e)) {
    ProVerdict v = classify_pro(*s, opts.horizon, opts.explain);
    r.tame = v.tame;
    r.relatively_tame = v.relatively_tame;
    r.compact = v.compact;
    r.locally_compact = v.locally_compact;
    r.trace = std::move(v.trace);
    std::visit([&](auto &&p) { r.payload = p; }, v.payload);
  } else {
    SequenceSpec spec;
    std::vector<TraceStep> head;
    if (const auto *g = std::get_if<GroupDescriptor>(&e)) {
      spec = discrete_as_product(*g);
      head.push_back({"discrete", "leCharPro",
                      "a countable discrete group G is the product G x 0 x 0 x ...; classified as "
                      "that product"});
    } else {
      spec = std::get<SequenceSpec>(e);
    }
    Verdict v = classify(spec, {opts.explain});
    r.tame = v.tame;
    r.relatively_tame = v.relatively_tame;
    r.trace = std::move(head);
    r.trace.insert(r.trace.end(), v.trace.begin(), v.trace.end());
    std::visit([&](auto &&p) { r.payload = p; }, v.payload);
  }
  r.relative_basis = r.tame ? "definition" : "theorem";
  return r;
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

json big(const BigInt &v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

json matrix_json(const IntMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(big(m(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

json mult_json(Mult m) {
  if (m.is_omega()) return "omega";
  return m.value();
}

json encode(const TameCertificate &c) {
  json primes = json::array();
  for (const auto &f : c.primes) {
    json F = json::array();
    for (const auto &t : f.F) F.push_back(t.str());
    primes.push_back({{"p", f.p}, {"threshold", f.threshold}, {"F", F}, {"k", f.k}});
  }
  json fam = json::array();
  for (const auto &t : c.families)
    fam.push_back({{"position", t.position}, {"a", t.a}, {"b", t.b}});
  return {{"torsion_threshold", c.torsion_threshold}, {"primes", primes}, {"families", fam}};
}

json encode(const Witness &w) {
  json j = {{"kind", w.kind == WitnessKind::ZN ? "ZN" : "SylowProduct"},
            {"part", to_string(w.part)},
            {"indices",
             {{"start", w.indices.start},
              {"period", w.indices.period},
              {"positions", w.indices.positions}}}};
  if (w.kind == WitnessKind::ZN) {
    json atoms = json::array();
    for (const auto &a : w.atoms) atoms.push_back(a.str());
    j["atoms"] = atoms;
  } else {
    j["p"] = w.p;
    json entries = json::array();
    for (const auto &e : w.entries)
      entries.push_back({{"position", e.position},
                         {"kind", to_string(e.kind)},
                         {"group", e.group.str()},
                         {"pieces", mult_json(e.pieces)},
                         {"kernel", e.kernel_tag}});
    j["entries"] = entries;
  }
  return j;
}

json encode(const ProCertificate &c) { return {{"n0", c.n0}, {"horizon", c.horizon}}; }

json encode(const ProWitness &w) {
  json ks = json::array();
  for (const auto &k : w.kernels)
    ks.push_back({{"n", k.n}, {"m", k.m}, {"rank", k.rank}, {"basis", matrix_json(k.basis)}});
  return {{"horizon", w.horizon}, {"increment", w.increment}, {"kernels", ks}};
}

json to_json_value(const Report &r) {
  json verdict = {{"tame", r.tame},
                  {"relatively_tame", r.relatively_tame},
                  {"relative_basis", r.relative_basis}};
  if (r.compact) verdict["compact"] = *r.compact;
  if (r.locally_compact) verdict["locally_compact"] = *r.locally_compact;
  json trace = json::array();
  for (const auto &t : r.trace)
    trace.push_back({{"id", t.id}, {"theorem", t.theorem}, {"detail", t.detail}});
  json j = {{"schema_version", kSchemaVersion},
            {"input", {{"format", to_string(r.format)}, {"text", r.input}}},
            {"verdict", verdict},
            {"trace", trace},
            {"timing_ms", std::round(r.timing_ms * 1000.0) / 1000.0}};
  std::visit([&](const auto &p) { j[r.has_certificate() ? "certificate" : "witness"] = encode(p); },
             r.payload);
  return j;
}

// ---------------------------------------------------------------------------
// Decoding. Strict: every key is required unless noted, unknown keys fail.

[[noreturn]] void schema(const std::string &path, const std::string &what) {
  throw Error(ErrorKind::Schema, path + ": " + what);
}

class Obj {
public:
  Obj(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema(path_, "expected an object");
  }
  ~Obj() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto &[k, v] : j_.items())
      if (!seen_.count(k)) schema(path_, "unexpected key '" + k + "'");
  }
  Obj(const Obj &) = delete;
  Obj &operator=(const Obj &) = delete;

  bool has(const std::string &k) const { return j_.contains(k); }
  const json &at(const std::string &k) {
    if (!j_.contains(k)) schema(path_, "missing key '" + k + "'");
    seen_.insert(k);
    return j_.at(k);
  }
  std::string sub(const std::string &k) const { return path_ + "." + k; }

  std::uint64_t u64(const std::string &k) { return as_u64(at(k), sub(k)); }
  bool boolean(const std::string &k) {
    const json &v = at(k);
    if (!v.is_boolean()) schema(sub(k), "expected a boolean");
    return v.get<bool>();
  }
  std::string str(const std::string &k) {
    const json &v = at(k);
    if (!v.is_string()) schema(sub(k), "expected a string");
    return v.get<std::string>();
  }
  const json &array(const std::string &k) {
    const json &v = at(k);
    if (!v.is_array()) schema(sub(k), "expected an array");
    return v;
  }

  static std::uint64_t as_u64(const json &v, const std::string &path) {
    if (!v.is_number_unsigned()) schema(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F> auto parse_field(const std::string &path, F &&f) {
  try {
    return f();
  } catch (const SyntaxError &e) {
    schema(path, e.what());
  } catch (const SemanticError &e) {
    schema(path, e.what());
  }
}

// Group strings must be in canonical form, so that each value has one spelling.
EntryTemplate canonical_template(const std::string &text, const std::string &path) {
  EntryTemplate t = parse_field(path, [&] { return parse_template(text); });
  if (t.str() != text) schema(path, "'" + text + "' is not canonical (" + t.str() + ")");
  return t;
}

BigInt big_from(const json &v, const std::string &path) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return BigInt(std::to_string(v.get<std::uint64_t>()));
    return BigInt(static_cast<long>(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    BigInt out;
    const bool digits = !s.empty() && s.find_first_not_of("-0123456789") == std::string::npos;
    if (!digits || out.set_str(s, 10) != 0 || out.get_str() != s)
      schema(path, "expected an integer");
    return out;
  }
  schema(path, "expected an integer");
}

IntMatrix matrix_from(const json &j, const std::string &path) {
  Obj o(j, path);
  const std::uint64_t r = o.u64("rows"), c = o.u64("cols");
  if (r > kMaxMatrixDim * 64 || c > kMaxMatrixDim * 64) schema(path, "matrix too large");
  const json &rows = o.array("entries");
  if (rows.size() != r) schema(o.sub("entries"), "row count mismatch");
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const std::string rp = o.sub("entries") + "[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != c) schema(rp, "column count mismatch");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = big_from(rows[i][k], rp);
  }
  return m;
}

std::vector<std::uint64_t> u64s(const json &a, const std::string &path) {
  std::vector<std::uint64_t> out;
  for (const auto &v : a) out.push_back(Obj::as_u64(v, path));
  return out;
}

TameCertificate decode_cert(const json &j) {
  Obj o(j, "certificate");
  TameCertificate c;
  c.torsion_threshold = o.u64("torsion_threshold");
  for (const auto &pj : o.array("primes")) {
    Obj po(pj, "certificate.primes[]");
    PrimeForm f;
    f.p = po.u64("p");
    f.threshold = po.u64("threshold");
    for (const auto &t : po.array("F")) {
      if (!t.is_string()) schema(po.sub("F"), "expected strings");
      f.F.push_back(canonical_template(t.get<std::string>(), po.sub("F")));
    }
    f.k = u64s(po.array("k"), po.sub("k"));
    c.primes.push_back(std::move(f));
  }
  for (const auto &fj : o.array("families")) {
    Obj fo(fj, "certificate.families[]");
    c.families.push_back({fo.u64("position"), fo.u64("a"), fo.u64("b")});
  }
  return c;
}

Witness decode_witness(const json &j) {
  Obj o(j, "witness");
  Witness w;
  const std::string kind = o.str("kind");
  if (kind == "ZN") w.kind = WitnessKind::ZN;
  else if (kind == "SylowProduct") w.kind = WitnessKind::SylowProduct;
  else schema(o.sub("kind"), "unknown witness kind '" + kind + "'");
  const auto part = parse_part(o.str("part"));
  if (!part) schema(o.sub("part"), "expected R, D or G");
  w.part = *part;
  {
    Obj io(o.at("indices"), o.sub("indices"));
    w.indices.start = io.u64("start");
    w.indices.period = io.u64("period");
    w.indices.positions = u64s(io.array("positions"), io.sub("positions"));
  }
  if (w.kind == WitnessKind::ZN) {
    for (const auto &a : o.array("atoms")) {
      if (!a.is_string()) schema(o.sub("atoms"), "expected strings");
      const auto g = canonical_template(a.get<std::string>(), o.sub("atoms")).base();
      if (g.atoms().size() != 1 || !g.towers().empty() || g.atoms().begin()->second != Mult(1))
        schema(o.sub("atoms"), "expected a single atom");
      w.atoms.push_back(g.atoms().begin()->first);
    }
  } else {
    w.p = o.u64("p");
    for (const auto &ej : o.array("entries")) {
      Obj eo(ej, "witness.entries[]");
      SylowEntry e;
      e.position = eo.u64("position");
      const auto k = parse_sylow_kind(eo.str("kind"));
      if (!k) schema(eo.sub("kind"), "unknown entry kind");
      e.kind = *k;
      e.group = canonical_template(eo.str("group"), eo.sub("group"));
      const json &pc = eo.at("pieces");
      if (pc.is_string() && pc.get<std::string>() == "omega") e.pieces = Mult::omega();
      else e.pieces = Obj::as_u64(pc, eo.sub("pieces"));
      e.kernel_tag = eo.str("kernel");
      w.entries.push_back(std::move(e));
    }
  }
  return w;
}

ProCertificate decode_pro_cert(const json &j) {
  Obj o(j, "certificate");
  return {o.u64("n0"), o.u64("horizon")};
}

ProWitness decode_pro_witness(const json &j) {
  Obj o(j, "witness");
  ProWitness w;
  w.horizon = o.u64("horizon");
  w.increment = o.u64("increment");
  for (const auto &kj : o.array("kernels")) {
    Obj ko(kj, "witness.kernels[]");
    KernelWitness k;
    k.n = ko.u64("n");
    k.m = ko.u64("m");
    k.rank = ko.u64("rank");
    k.basis = matrix_from(ko.at("basis"), ko.sub("basis"));
    w.kernels.push_back(std::move(k));
  }
  return w;
}

} // namespace

std::string to_json(const Report &r) { return to_json_value(r).dump(2) + "\n"; }

Report report_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorKind::Schema, std::string("not JSON: ") + e.what());
  }
  Report r;
  Obj o(j, "report");
  if (o.u64("schema_version") != static_cast<std::uint64_t>(kSchemaVersion))
    schema("report.schema_version", "unsupported version");
  {
    Obj in(o.at("input"), "input");
    const std::string f = in.str("format");
    if (f == "product") r.format = InputFormat::Product;
    else if (f == "invsys") r.format = InputFormat::InvSys;
    else if (f == "discrete") r.format = InputFormat::Discrete;
    else schema("input.format", "unknown format '" + f + "'");
    r.input = in.str("text");
  }
  const bool pro = r.format == InputFormat::InvSys;
  {
    Obj v(o.at("verdict"), "verdict");
    r.tame = v.boolean("tame");
    r.relatively_tame = v.boolean("relatively_tame");
    r.relative_basis = v.str("relative_basis");
    if (r.relative_basis != "definition" && r.relative_basis != "theorem")
      schema("verdict.relative_basis", "expected definition or theorem");
    if (pro) {
      r.compact = v.boolean("compact");
      r.locally_compact = v.boolean("locally_compact");
    }
  }
  const json &trace = o.array("trace");
  if (trace.empty()) schema("trace", "empty");
  for (const auto &tj : trace) {
    Obj t(tj, "trace[]");
    r.trace.push_back({t.str("id"), t.str("theorem"), t.str("detail")});
  }
  const json &timing = o.at("timing_ms");
  if (!timing.is_number() || timing.get<double>() < 0) schema("timing_ms", "expected a number");
  r.timing_ms = timing.get<double>();

  const bool cert = o.has("certificate");
  if (cert == o.has("witness")) schema("report", "exactly one of certificate, witness required");
  if (cert) {
    if (pro) r.payload = decode_pro_cert(o.at("certificate"));
    else r.payload = decode_cert(o.at("certificate"));
  } else {
    if (pro) r.payload = decode_pro_witness(o.at("witness"));
    else r.payload = decode_witness(o.at("witness"));
  }
  return r;
}

std::string to_text(const Report &r) {
  std::string out = "input: ";
  out += r.format == InputFormat::InvSys ? "inverse system\n" : r.input + "\n";
  out += "verdict: ";
  if (r.tame) out += "tame, relatively tame";
  else out += r.relatively_tame ? "not tame, relatively tame" : "not tame, not relatively tame";
  out += "\n";
  if (r.compact) out += std::string("compact: ") + (*r.compact ? "yes" : "no") + "\n";
  if (r.locally_compact)
    out += std::string("locally compact: ") + (*r.locally_compact ? "yes" : "no") + "\n";
  out += "trace:\n";
  for (const auto &t : r.trace) out += "  " + t.id + " [" + t.theorem + "] " + t.detail + "\n";
  const json j = to_json_value(r);
  const char *key = r.has_certificate() ? "certificate" : "witness";
  out += std::string(key) + ":\n" + j.at(key).dump(2) + "\n";
  return out;
}

std::vector<std::string> check_report(const GroupExpr &input, const Report &r) {
  std::vector<std::string> errs;
  if (r.format != format_of(input)) errs.push_back("input format mismatch");
  if (r.input != pretty(input)) errs.push_back("input text is not the canonical form of the input");
  if (r.trace.empty()) errs.push_back("empty trace");
  const bool cert = r.has_certificate();
  if (r.tame != cert || r.relatively_tame != cert)
    errs.push_back(cert ? "certificate with a non-tame verdict" : "witness with a tame verdict");
  if (r.relative_basis != (cert ? "definition" : "theorem")) errs.push_back("relative_basis mismatch");
  if (!errs.empty()) return errs;

  auto append = [&](std::vector<std::string> more) {
    errs.insert(errs.end(), more.begin(), more.end());
  };
  if (const auto *s = std::get_if<InverseSystem>(&input)) {
    if (!r.compact || !r.locally_compact) return {"missing compactness fields"};
    if (*r.locally_compact != cert) errs.push_back("locally_compact mismatch");
    try {
      if (*r.compact != (cert && is_compact(*s))) errs.push_back("compact mismatch");
    } catch (const Error &e) {
      errs.push_back(e.what());
    }
    if (const auto *c = std::get_if<ProCertificate>(&r.payload)) append(check_pro_certificate(*s, *c));
    else if (const auto *w = std::get_if<ProWitness>(&r.payload)) append(check_pro_witness(*s, *w));
    else errs.push_back("product payload for an inverse system");
    return errs;
  }
  if (r.compact || r.locally_compact) errs.push_back("compactness fields on a discrete product");
  const SequenceSpec spec = std::holds_alternative<GroupDescriptor>(input)
                                ? discrete_as_product(std::get<GroupDescriptor>(input))
                                : std::get<SequenceSpec>(input);
  if (const auto *c = std::get_if<TameCertificate>(&r.payload)) append(check_certificate(spec, *c));
  else if (const auto *w = std::get_if<Witness>(&r.payload)) append(check_witness(spec, *w));
  else errs.push_back("inverse-system payload for a product");
  return errs;
}

} // namespace quasitame
