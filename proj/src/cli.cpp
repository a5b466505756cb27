#include "doctrina/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <set>

#include "doctrina/error.hpp"
#include "doctrina/fixtures.hpp"
#include "doctrina/structure.hpp"

namespace doctrina {

namespace {

// one line per value; newlines would break the key=value framing
std::string flat(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n')
      out += "\\n";
    else if (c == '\\')
      out += "\\\\";
    else
      out += c;
  }
  return out;
}

bool usage_code(Errc c) {
  return c == Errc::SyntaxError || c == Errc::UnresolvedReference || c == Errc::DuplicateName || c == Errc::UsageError;
}

struct Options {
  std::string file, doctrine, object, kind, model, constant, demo;
  std::optional<std::string> axiom;
  std::optional<std::uint64_t> seed;
};

struct Loaded {
  SpecDocument doc;
  SpecEnv env;
};

Loaded load(const Options& o, const Limits& limits, Report& report) {
  Loaded l;
  l.doc = parse_spec_file(o.file);
  Report sub;
  l.env = build_spec(l.doc, limits, sub);
  report.merge(sub, "spec: ");
  return l;
}

const DoctrineRef& doctrine_named(const SpecEnv& env, const std::string& name) {
  const auto it = env.doctrines.find(name);
  if (it == env.doctrines.end()) fail(Errc::UnresolvedReference, "no doctrine named '" + name + "'");
  return it->second;
}

Obj object_named(const Doctrine& d, const std::string& label) {
  const auto o = d.base()->find_object(label);
  if (!o) fail(Errc::UnresolvedReference, "no object '" + label + "' in the base of " + d.name());
  return *o;
}

struct ExtensionRun {
  DoctrineRef p;
  Obj x = 0;
  Extension e;
};

ExtensionRun run_extend(const Loaded& l, const std::string& doctrine, const Options& o, const Limits& limits,
                        Report& report) {
  ExtensionRun run;
  run.p = doctrine_named(l.env, doctrine);
  run.x = object_named(*run.p, o.object);
  std::optional<Elem> phi;
  if (o.axiom) phi = resolve_element(l.env, doctrine, run.x, *o.axiom);
  Report sub;
  run.e = extend(run.p, run.x, phi, limits, sub);
  report.merge(sub);
  report.fact("extension.object", run.p->base()->object_label(run.x));
  report.fact("extension.axiom", phi ? run.p->fiber(run.x)->label(*phi) : "none");
  // an axiom equal to top is dropped, which is the add-constant path too
  if (!run.e.phi)
    report.pass("primary not required", "add-constant path: no axiom or the axiom is top, so the starting doctrine need not be primary");
  return run;
}

std::string transport_table(const TransportMatrix& m) {
  std::string out = "kind                 witness  detected preserved\n";
  for (const auto& row : m.rows) {
    std::string k(kind_name(row.kind));
    k.resize(std::max<std::size_t>(k.size(), 20), ' ');
    auto cell = [](Outcome o) {
      std::string s(outcome_name(o));
      s.resize(std::max<std::size_t>(s.size(), 8), ' ');
      return s;
    };
    out += k + " " + cell(row.witness) + " " + cell(row.detected) + " " +
           (row.preservation_claimed ? std::string(outcome_name(row.preserved)) : "no claim") + "\n";
  }
  return out;
}

void cmd_validate(const Options& o, const Limits& limits, CommandResult& res) {
  const Loaded l = load(o, limits, res.report);
  res.report.fact("blocks", std::to_string(l.doc.blocks.size()));
}

void cmd_detect(const Options& o, const Limits& limits, CommandResult& res) {
  const Loaded l = load(o, limits, res.report);
  const auto& d = doctrine_named(l.env, o.doctrine);
  StructureContext ctx(*d, limits);
  std::vector<Kind> kinds(std::begin(kAllKinds), std::end(kAllKinds));
  if (!o.kind.empty()) {
    const auto k = kind_from_name(o.kind);
    if (!k) fail(Errc::UsageError, "unknown kind '" + o.kind + "'");
    kinds = {*k};
  }
  for (Kind k : kinds) {
    KindResult r;
    try {
      r = detect_structure(ctx, k);
    } catch (const Error& e) {
      if (e.code() != Errc::PrerequisiteMissing) throw;
      r = {k, Outcome::fail, e.witness(), {}};
    }
    const std::string name(kind_name(k));
    const char* verdict = r.outcome == Outcome::pass ? "holds" : r.outcome == Outcome::fail ? "absent" : "skipped";
    res.report.fact("structure." + name, verdict);
    for (const auto& [flag, v] : r.flags) res.report.fact("structure." + name + "." + flag, v ? "true" : "false");
    // asked about one kind: absence is the answer "no"; in a survey it is data
    if (!o.kind.empty())
      res.report.add({name + " holds", r.outcome, r.witness});
    else if (r.outcome == Outcome::skipped)
      res.report.skip("detect " + name, r.witness);
    else
      res.report.pass("detect " + name, std::string(verdict) + (r.witness.empty() ? "" : ": " + r.witness));
  }
}

void cmd_extend(const Options& o, const Limits& limits, CommandResult& res, bool emit) {
  const Loaded l = load(o, limits, res.report);
  const auto run = run_extend(l, o.doctrine, o, limits, res.report);
  const Extension& e = run.e;
  if (emit) {
    const auto diff = extension_fiber_difference(e, limits);
    res.report.expect(!diff, "fibers are the downsets below P(pr1)(phi)", diff.value_or(""));
    const auto nc = interpret_new_constant(e);
    res.report.expect(nc.is_top, "the new constant satisfies the axiom", "f_X(phi) reindexed is not the top");
    for (Obj a : e.doctrine()->base()->objects()) {
      const auto fib = e.doctrine()->fiber(a);
      const std::string lab = e.doctrine()->base()->object_label(a);
      res.report.fact("fiber." + lab + ".size", std::to_string(fib->size()));
      res.report.fact("fiber." + lab + ".top", fib->label(e.top(a)));
    }
  }
  Report tr;
  const auto m = transport_report(e, limits, tr);
  res.report.merge(tr);
  res.sections.emplace_back("transport", transport_table(m));
  if (emit) {
    std::string why;
    const std::string name = o.doctrine + "_" + e.source->base()->object_label(e.x);
    if (auto doc = extension_spec(e, name, limits, why))
      res.sections.emplace_back("extension", print_spec(*doc));
    else
      res.sections.emplace_back("extension", "no block emitted: " + why + "\n");
  }
}

void cmd_conservative(const Options& o, const Limits& limits, CommandResult& res) {
  const Loaded l = load(o, limits, res.report);
  const auto run = run_extend(l, o.doctrine, o, limits, res.report);
  Report sub;
  conservativity_check(run.e, limits, sub);
  res.report.merge(sub);
}

void cmd_factorize(const Options& o, const Limits& limits, CommandResult& res) {
  const Loaded l = load(o, limits, res.report);
  const auto it = l.env.morphisms.find(o.model);
  if (it == l.env.morphisms.end()) fail(Errc::UnresolvedReference, "no morphism named '" + o.model + "'");
  const DoctrineMorphism& g = it->second;
  // the extension is taken of the model's source doctrine
  std::string source;
  for (const auto& [n, d] : l.env.doctrines)
    if (d == g.source) source = n;
  const auto run = run_extend(l, source, o, limits, res.report);
  const Category& D = *g.target->base();
  const Arrow c = resolve_arrow(D, D.terminal(), g.functor(run.x), o.constant, limits);
  Report sub;
  const auto fac = factorize_model(run.e, Model{g, c}, {}, true, limits, sub);
  res.report.merge(sub);
  const auto& C = *run.e.doctrine()->base();
  for (Obj a : C.objects())
    res.report.fact("factor.object." + C.object_label(a), D.object_label(fac.morphism.functor(a)));
  res.report.fact("factor.constant", D.arrow_label(fac.morphism.functor(run.e.constant)));
  for (const auto& [k, out] : fac.preserved)
    res.report.fact("factor.preserves." + std::string(kind_name(k)), std::string(outcome_name(out)));
}

void cmd_demo(const Options& o, const Limits& limits, CommandResult& res) {
  const bool seeded = o.demo == "kleisli-roundtrip";
  if (seeded && !o.seed) fail(Errc::UsageError, "kleisli-roundtrip needs --seed");
  if (!seeded && o.seed) fail(Errc::UsageError, "--seed only applies to kleisli-roundtrip");
  if (o.demo == "powerset-collapse")
    powerset_collapse_fixture(limits, res.report);
  else if (o.demo == "powerset-XY")
    powerset_xy_fixture(limits, res.report);
  else if (o.demo == "lt-axiom")
    lt_axiom_fixture(limits, res.report);
  else if (o.demo == "distributive-law")
    distributive_law_fixture(limits, res.report);
  else
    kleisli_roundtrip_fixture(*o.seed, limits, res.report);
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s = "doctrina";
  for (const auto& a : args) {
    const bool plain = !a.empty() && a.find_first_of(" \t\"'") == std::string::npos;
    s += " " + (plain ? a : "'" + a + "'");
  }
  return s;
}

}  // namespace

std::string render_report(const std::string& command, const Report& report,
                          const std::vector<std::pair<std::string, std::string>>& sections, int status) {
  std::string out = "$ " + command + "\n\n";
  for (const auto& c : report.checks()) {
    const char* tag = c.outcome == Outcome::pass ? "[pass] " : c.outcome == Outcome::fail ? "[FAIL] " : "[skip] ";
    out += tag + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "\n";
  }
  if (!report.facts().empty()) {
    out += "\nfacts:\n";
    for (const auto& [k, v] : report.facts()) out += "  " + k + " = " + v + "\n";
  }
  for (const auto& [title, text] : sections) out += "\n" + title + ":\n" + text;
  out += "\n" + std::to_string(report.count(Outcome::pass)) + " passed, " +
         std::to_string(report.count(Outcome::fail)) + " failed, " +
         std::to_string(report.count(Outcome::skipped)) + " skipped\n";

  out += "\n```report\ncommand=" + flat(command) + "\n";
  std::size_t i = 0;
  for (const auto& c : report.checks()) {
    const std::string key = "check." + std::to_string(i++);
    out += key + ".name=" + flat(c.name) + "\n";
    out += key + ".outcome=" + std::string(outcome_name(c.outcome)) + "\n";
    if (!c.detail.empty()) out += key + ".detail=" + flat(c.detail) + "\n";
  }
  for (const auto& [k, v] : report.facts()) out += "fact." + k + "=" + flat(v) + "\n";
  out += "count.pass=" + std::to_string(report.count(Outcome::pass)) + "\n";
  out += "count.fail=" + std::to_string(report.count(Outcome::fail)) + "\n";
  out += "count.skipped=" + std::to_string(report.count(Outcome::skipped)) + "\n";
  out += "exit=" + std::to_string(status) + "\n```\n";
  return out;
}

CommandResult run_command(const std::vector<std::string>& args) {
  CommandResult res;
  const std::string command = join_args(args);
  const Limits limits{};
  Options o;

  CLI::App app{"Finite doctrines: validation, structure detection and the extension by a constant and an axiom",
               "doctrina"};
  app.require_subcommand(1);
  auto* validate = app.add_subcommand("validate", "parse and validate every block of a spec file");
  auto* print = app.add_subcommand("print", "print a spec file in canonical form");
  auto* detect = app.add_subcommand("detect", "detect structure on a doctrine");
  auto* ext = app.add_subcommand("extend", "add a constant of type X, and optionally an axiom over it");
  auto* transport = app.add_subcommand("transport", "transport report for the extension");
  auto* conservative = app.add_subcommand("conservative", "is the extension conservative");
  auto* factorize = app.add_subcommand("factorize", "factor a model through the extension");
  auto* demo = app.add_subcommand("demo", "run a worked example");
  for (auto* s : {validate, print, detect, ext, transport, conservative, factorize})
    s->add_option("file", o.file, "spec file")->required();
  detect->add_option("--doctrine", o.doctrine)->required();
  detect->add_option("--kind", o.kind);
  for (auto* s : {ext, transport, conservative}) s->add_option("--doctrine", o.doctrine)->required();
  for (auto* s : {ext, transport, conservative, factorize}) {
    s->add_option("--object", o.object, "the type X of the new constant")->required();
    s->add_option("--axiom", o.axiom, "phi in P(X), by label (or a formula for an lt builtin)");
  }
  factorize->add_option("--model", o.model, "a morphism block (G, g)")->required();
  factorize->add_option("--constant", o.constant, "an arrow t -> G(X) of the target base")->required();
  demo->add_option("name", o.demo)
      ->required()
      ->check(CLI::IsMember({"powerset-collapse", "powerset-XY", "lt-axiom", "distributive-law", "kleisli-roundtrip"}));
  demo->add_option("--seed", o.seed, "seed for kleisli-roundtrip");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    res.output = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.status = 2;
    res.report.fail("usage", e.what());
    res.output = render_report(command, res.report, {}, 2) + "\n" + app.help();
    return res;
  }

  try {
    if (*print) {
      res.output = print_spec(parse_spec_file(o.file));
      return res;
    }
    if (*validate) cmd_validate(o, limits, res);
    if (*detect) cmd_detect(o, limits, res);
    if (*ext) cmd_extend(o, limits, res, true);
    if (*transport) cmd_extend(o, limits, res, false);
    if (*conservative) cmd_conservative(o, limits, res);
    if (*factorize) cmd_factorize(o, limits, res);
    if (*demo) cmd_demo(o, limits, res);
    res.status = res.report.ok() ? 0 : 1;
  } catch (const Error& e) {
    res.status = usage_code(e.code()) ? 2 : 1;
    res.report.fail(std::string(errc_name(e.code())), e.witness());
    res.report.fact("error", std::string(errc_name(e.code())));
  }
  res.output = render_report(command, res.report, res.sections, res.status);
  return res;
}

std::optional<SpecDocument> extension_spec(const Extension& e, const std::string& name, const Limits& limits,
                                           std::string& why) {
  constexpr std::size_t kMaxArrows = 64, kMaxElements = 512;
  const Category& K = *e.doctrine()->base();
  if (K.lazy()) {
    why = "the base is lazy (finite-set probes)";
    return std::nullopt;
  }
  const auto objs = K.objects();
  const HomTable homs(K, objs, std::min(limits.hom_cap, kMaxArrows + 1));

  // arrow names, deduplicated in enumeration order
  std::map<Arrow, std::string> names;
  std::set<std::string> used;
  for (Obj a : objs) names[K.identity(a)] = "id_" + K.object_label(a);
  for (const auto& kv : names) used.insert(kv.second);
  std::vector<Arrow> arrows;
  for (Obj a : objs)
    for (Obj b : objs) {
      const auto& h = homs(a, b);
      if (!h) {
        why = "a hom-set exceeds " + std::to_string(kMaxArrows) + " arrows";
        return std::nullopt;
      }
      for (const Arrow& f : *h) {
        if (names.count(f)) continue;
        std::string n = K.arrow_label(f);
        for (int i = 2; used.count(n); ++i) n = K.arrow_label(f) + "#" + std::to_string(i);
        used.insert(n);
        names[f] = n;
        arrows.push_back(f);
      }
    }
  if (arrows.size() > kMaxArrows) {
    why = std::to_string(arrows.size()) + " arrows, more than " + std::to_string(kMaxArrows);
    return std::nullopt;
  }
  std::size_t elements = 0;
  for (Obj a : objs) elements += e.doctrine()->fiber(a)->size();
  if (elements > kMaxElements) {
    why = std::to_string(elements) + " fiber elements, more than " + std::to_string(kMaxElements);
    return std::nullopt;
  }

  SpecDocument doc;
  auto entry = [](std::string key, std::vector<std::string> args, std::vector<std::string> values) {
    return SpecEntry{std::move(key), std::move(args), std::move(values), 0};
  };
  std::vector<std::string> fiber_names;
  for (Obj a : objs) {
    const auto fib = e.doctrine()->fiber(a);
    SpecBlock p{"poset", name + "@" + K.object_label(a), "", {}, 0};
    std::vector<std::string> els;
    for (std::size_t i = 0; i < fib->size(); ++i) els.push_back(fib->label(fib->at(i)));
    p.entries.push_back(entry("elements", {}, els));
    std::vector<std::string> covers;
    for (const auto& [x, y] : covering_pairs(*fib)) {
      covers.push_back(fib->label(x));
      covers.push_back(fib->label(y));
    }
    if (!covers.empty()) p.entries.push_back(entry("covers", {}, covers));
    fiber_names.push_back(p.name);
    doc.blocks.push_back(std::move(p));
  }

  SpecBlock c{"category", name, "", {}, 0};
  std::vector<std::string> labels;
  for (Obj a : objs) labels.push_back(K.object_label(a));
  c.entries.push_back(entry("objects", {}, labels));
  for (const Arrow& f : arrows)
    c.entries.push_back(entry("arrow", {names[f]}, {K.object_label(f.dom), K.object_label(f.cod)}));
  for (const Arrow& g : arrows)
    for (const Arrow& f : arrows)
      if (f.cod == g.dom) c.entries.push_back(entry("compose", {names[g], names[f]}, {names[K.compose(g, f)]}));
  c.entries.push_back(entry("terminal", {}, {K.object_label(K.terminal())}));
  for (Obj a : objs)
    for (Obj b : objs)
      c.entries.push_back(entry("product", {K.object_label(a), K.object_label(b)},
                                {K.object_label(K.product(a, b)), names[K.pr1(a, b)], names[K.pr2(a, b)]}));
  doc.blocks.push_back(std::move(c));

  SpecBlock d{"doctrine", name + "_doctrine", "", {}, 0};
  d.entries.push_back(entry("base", {}, {name}));
  for (std::size_t i = 0; i < objs.size(); ++i)
    d.entries.push_back(entry("fiber", {K.object_label(objs[i])}, {fiber_names[i]}));
  for (const Arrow& f : arrows) {
    const auto from = e.doctrine()->fiber(f.cod);
    const auto to = e.doctrine()->fiber(f.dom);
    const auto re = e.doctrine()->reindex(f);
    std::vector<std::string> vals;
    for (std::size_t i = 0; i < from->size(); ++i) vals.push_back(to->label(re(from->at(i))));
    d.entries.push_back(entry("reindex", {names[f]}, vals));
  }
  doc.blocks.push_back(std::move(d));
  return doc;
}

}  // namespace doctrina
