#include "w11/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "w11/certify.hpp"
#include "w11/complex11.hpp"
#include "w11/count.hpp"
#include "w11/graphs.hpp"
#include "w11/parallel.hpp"

namespace w11::cli {

namespace fs = std::filesystem;

std::string to_string(Command c) {
  switch (c) {
    case Command::Graphs: return "graphs";
    case Command::H11: return "h11";
    case Command::Alpha: return "alpha";
    case Command::Beta: return "beta";
    case Command::Sweep: return "sweep";
    case Command::Purity: return "purity";
    case Command::Count: return "count";
    case Command::Tau: return "tau";
    case Command::Genfun: return "genfun";
  }
  return "?";
}

namespace {

enum class Kind { Int, Str, Flag };

struct OptSpec {
  std::string name;  // flag name without dashes; parameter key uses '_'
  Kind kind;
  bool required;
  std::string help;
};

struct CmdSpec {
  Command command;
  std::string word;    // first word
  std::string action;  // second word, may be empty
  std::vector<OptSpec> options;
  std::string help;
};

const std::vector<CmdSpec>& command_table() {
  static const std::vector<CmdSpec> t{
      {Command::Graphs, "graphs", "enumerate",
       {{"genus", Kind::Int, true, "genus"},
        {"markings", Kind::Int, true, "number of legs"},
        {"edges", Kind::Str, true, "1, 2 or trees"}},
       "list stable graph classes"},
      {Command::H11, "h11", "dim", {{"genus", Kind::Int, true, "genus"}, {"markings", Kind::Int, true, "legs"}},
       "dimension of H^11"},
      {Command::Alpha, "alpha", "",
       {{"markings", Kind::Int, true, "legs"}, {"matrix", Kind::Str, false, "write the matrix here"}},
       "genus-1 boundary restriction"},
      {Command::Beta, "beta", "",
       {{"genus", Kind::Int, true, "genus"},
        {"markings", Kind::Int, true, "legs"},
        {"block-order", Kind::Flag, false, "also run the block ordering"},
        {"matrix", Kind::Str, false, "write the matrix here"},
        {"ledger", Kind::Str, false, "ledger JSON or bundle index to start from"}},
       "second differential and its injectivity"},
      {Command::Sweep, "sweep", "",
       {{"gmax", Kind::Int, true, "largest genus"},
        {"nmax", Kind::Int, true, "largest markings at the top genus"},
        {"no-replay", Kind::Flag, false, "skip replaying the bundle"}},
       "vanishing sweep; --out names the bundle directory"},
      {Command::Purity, "purity", "",
       {{"genus", Kind::Int, true, "genus"},
        {"markings", Kind::Int, true, "legs"},
        {"degree", Kind::Int, true, "even degree <= 12"},
        {"tree", Kind::Flag, false, "inline the certificate tree"}},
       "purity certificate"},
      {Command::Count, "count", "approx",
       {{"betti", Kind::Str, true, "h^0,h^2,...,h^12"}, {"dim", Kind::Int, true, "dimension"},
        {"q", Kind::Int, true, "field size"}},
       "polynomial approximant"},
      {Command::Count, "count", "m0bar", {{"n", Kind::Int, true, "legs"}, {"q", Kind::Int, true, "field size"}},
       "points of Mbar_{0,n}"},
      {Command::Count, "count", "tau", {{"upto", Kind::Int, true, "number of coefficients"}}, "tau(1..N)"},
      {Command::Tau, "tau", "", {{"upto", Kind::Int, true, "number of coefficients"}}, "tau(1..N)"},
      {Command::Genfun, "genfun", "s12", {{"upto", Kind::Int, true, "largest n"}}, "multiplicity series"},
  };
  return t;
}

const CmdSpec& spec_for(Command c, const std::string& action) {
  for (const auto& s : command_table())
    if (s.command == c && s.action == action) return s;
  throw std::logic_error("no command " + to_string(c) + " " + action);
}

std::string key_of(const std::string& name) {
  std::string k = name;
  for (auto& ch : k)
    if (ch == '-') ch = '_';
  return k;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

void require_stable(std::int64_t g, std::int64_t n) {
  require(g >= 0 && n >= 0, "genus and markings must be nonnegative");
  require(2 * g - 2 + n > 0, "unstable pair (" + std::to_string(g) + ", " + std::to_string(n) + ")");
}

std::vector<Integer> parse_betti(const std::string& s) {
  std::vector<Integer> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Integer z;
    if (item.empty() || z.set_str(item, 10) != 0) throw UsageError("bad Betti number '" + item + "'");
    out.push_back(z);
  }
  if (out.size() != 7) throw UsageError("--betti needs 7 comma-separated values");
  return out;
}

void validate(Invocation& inv) {
  const Json& p = inv.parameters;
  auto i = [&](const char* k) { return p.at(k).get<std::int64_t>(); };
  switch (inv.command) {
    case Command::Graphs: {
      const std::string e = p.at("edges");
      require(e == "1" || e == "2" || e == "trees", "--edges must be 1, 2 or trees");
      require_stable(i("genus"), i("markings"));
      if (e == "trees") require(i("genus") == 0 && i("markings") >= 3, "trees need genus 0 and >= 3 legs");
      require(i("markings") <= 32, "at most 32 markings");
      break;
    }
    case Command::H11:
    case Command::Beta:
      require_stable(i("genus"), i("markings"));
      require(i("markings") <= 30, "at most 30 markings");
      break;
    case Command::Alpha:
      require_stable(1, i("markings"));
      require(i("markings") <= 30, "at most 30 markings");
      break;
    case Command::Sweep:
      require(i("gmax") >= 2 && i("nmax") >= 2, "sweep bounds must be >= 2");
      require(inv.out.has_value(), "sweep needs --out DIR");
      break;
    case Command::Purity: {
      require_stable(i("genus"), i("markings"));
      auto k = i("degree");
      require(k >= 0 && k <= 12 && k % 2 == 0, "--degree must be even and <= 12");
      break;
    }
    case Command::Count:
      if (inv.action == "approx") {
        parse_betti(p.at("betti"));
        require(i("dim") >= 0, "--dim must be nonnegative");
        require(i("q") >= 1, "--q must be positive");
      } else if (inv.action == "m0bar") {
        require(i("n") >= 3 && i("n") <= 9, "--n must be between 3 and 9");
        require(i("q") >= 1, "--q must be positive");
      } else {
        require(i("upto") >= 1, "--upto must be positive");
      }
      break;
    case Command::Tau:
    case Command::Genfun:
      require(i("upto") >= 1, "--upto must be positive");
      break;
  }
}

}  // namespace

std::vector<std::vector<std::string>> usage_examples() {
  return {
      {"graphs", "enumerate", "--genus", "2", "--markings", "4", "--edges", "1"},
      {"h11", "dim", "--genus", "1", "--markings", "13"},
      {"alpha", "--markings", "12"},
      {"beta", "--genus", "2", "--markings", "12"},
      {"beta", "--genus", "2", "--markings", "12", "--block-order"},
      {"sweep", "--gmax", "3", "--nmax", "12", "--out", "certs/"},
      {"purity", "--genus", "5", "--markings", "0", "--degree", "12"},
      {"count", "approx", "--betti", "1,2,2,1,0,0,0", "--dim", "3", "--q", "2"},
      {"count", "m0bar", "--n", "6", "--q", "7"},
      {"count", "tau", "--upto", "50"},
      {"tau", "--upto", "50"},
      {"genfun", "s12", "--upto", "20"},
  };
}

std::string usage() {
  std::ostringstream u;
  u << "usage: weight11 <command> [options]\n\ncommands:\n";
  for (const auto& s : command_table()) {
    u << "  " << s.word << (s.action.empty() ? "" : " " + s.action);
    for (const auto& o : s.options) {
      std::string f = "--" + o.name + (o.kind == Kind::Flag ? "" : o.kind == Kind::Int ? " N" : " X");
      u << ' ' << (o.required ? f : "[" + f + "]");
    }
    u << "\n      " << s.help << '\n';
  }
  u << "  certify sweep ...   same as sweep\n";
  u << "\nglobal options:\n"
       "  --out PATH                report file (sweep: bundle directory)\n"
       "  --format json|csv\n"
       "  --threads N               default: machine parallelism\n"
       "  --modular-precheck on|off default: on\n"
       "  --timing                  add wall-clock timing to the report\n"
       "  --config FILE             key = value defaults (also $WEIGHT11_CONFIG)\n"
       "\nexit codes: 0 ok, 1 verification failure, 2 usage error, 3 internal inconsistency, 4 I/O error\n"
       "\nexamples:\n";
  for (const auto& ex : usage_examples()) {
    u << "  weight11";
    for (const auto& a : ex) u << ' ' << a;
    u << '\n';
  }
  return u.str();
}

Invocation parse_invocation(const std::vector<std::string>& argv) {
  CLI::App app{"weight11"};
  app.require_subcommand(1);
  app.allow_config_extras(false);
  app.set_help_flag();

  std::string out, format = "json", precheck = "on";
  unsigned threads = hardware_threads();
  bool timing = false;
  app.add_option("--out", out);
  app.add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads)->check(CLI::PositiveNumber);
  app.add_option("--modular-precheck", precheck)->check(CLI::IsMember({"on", "off"}));
  app.add_flag("--timing", timing);
  app.set_config("--config")->envname("WEIGHT11_CONFIG");

  // Storage per (command, option).
  struct Slot {
    const CmdSpec* cmd;
    const OptSpec* opt;
    std::int64_t i = 0;
    std::string s;
    bool f = false;
    CLI::Option* handle = nullptr;
    CLI::App* owner = nullptr;
  };
  std::vector<std::unique_ptr<Slot>> slots;
  std::vector<std::pair<CLI::App*, const CmdSpec*>> leaves;
  std::map<std::string, CLI::App*> words;

  auto attach = [&](CLI::App* sub, const CmdSpec& spec) {
    sub->fallthrough();
    for (const auto& o : spec.options) {
      auto slot = std::make_unique<Slot>();
      slot->cmd = &spec;
      slot->opt = &o;
      slot->owner = sub;
      const std::string flag = "--" + o.name;
      if (o.kind == Kind::Int) slot->handle = sub->add_option(flag, slot->i, o.help);
      else if (o.kind == Kind::Str) slot->handle = sub->add_option(flag, slot->s, o.help);
      else slot->handle = sub->add_flag(flag, slot->f, o.help);
      if (o.required) slot->handle->required();
      slots.push_back(std::move(slot));
    }
    leaves.emplace_back(sub, &spec);
  };

  for (const auto& spec : command_table()) {
    CLI::App*& top = words[spec.word];
    if (!top) {
      top = app.add_subcommand(spec.word, spec.help);
      top->fallthrough();
    }
    if (spec.action.empty()) {
      attach(top, spec);
    } else {
      top->require_subcommand(1);
      attach(top->add_subcommand(spec.action, spec.help), spec);
    }
  }
  // certify sweep: alias for sweep.
  const CmdSpec& sweep_spec = spec_for(Command::Sweep, "");
  CLI::App* certify_cmd = app.add_subcommand("certify", "certificate commands");
  certify_cmd->fallthrough();
  certify_cmd->require_subcommand(1);
  attach(certify_cmd->add_subcommand("sweep", sweep_spec.help), sweep_spec);

  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  Invocation inv;
  const CmdSpec* chosen = nullptr;
  for (auto& [sub, spec] : leaves)
    if (sub->parsed()) chosen = spec;
  if (!chosen) throw UsageError("missing subcommand");
  inv.command = chosen->command;
  inv.action = chosen->action;
  for (const auto& slot : slots) {
    if (slot->cmd != chosen) continue;
    // The certify alias shares the spec with sweep; use whichever parsed.
    if (!slot->owner->parsed()) continue;
    const std::string key = key_of(slot->opt->name);
    if (slot->opt->kind == Kind::Flag) inv.parameters[key] = slot->f;
    else if (slot->handle->count() == 0) continue;
    else if (slot->opt->kind == Kind::Int) inv.parameters[key] = slot->i;
    else inv.parameters[key] = slot->s;
  }
  if (!out.empty()) inv.out = out;
  inv.format = format == "csv" ? Format::Csv : Format::Json;
  inv.threads = threads;
  inv.modular_precheck = precheck == "on";
  inv.timing = timing;
  validate(inv);
  return inv;
}

std::vector<std::string> render(const Invocation& inv) {
  const CmdSpec& spec = spec_for(inv.command, inv.action);
  std::vector<std::string> a{spec.word};
  if (!spec.action.empty()) a.push_back(spec.action);
  for (const auto& o : spec.options) {
    const std::string key = key_of(o.name);
    if (!inv.parameters.contains(key)) continue;
    const Json& v = inv.parameters.at(key);
    if (o.kind == Kind::Flag) {
      if (v.get<bool>()) a.push_back("--" + o.name);
    } else {
      a.push_back("--" + o.name);
      a.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  if (inv.out) {
    a.push_back("--out");
    a.push_back(*inv.out);
  }
  a.insert(a.end(), {"--format", inv.format == Format::Csv ? "csv" : "json", "--threads", std::to_string(inv.threads),
                     "--modular-precheck", inv.modular_precheck ? "on" : "off"});
  if (inv.timing) a.push_back("--timing");
  return a;
}

// ---------------------------------------------------------------------------
// Reports.

Json report_json(const Report& r) {
  Json axioms = Json::array();
  for (const auto& tag : r.axioms_consumed) {
    std::string citation;
    for (const auto& a : certify::axiom_table())
      if (a.tag == tag) citation = a.citation;
    axioms.push_back({{"tag", tag}, {"citation", citation}});
  }
  Json j{{"schema_version", kSchemaVersion},
         {"command", r.command},
         {"parameters", r.parameters},
         {"results", r.results},
         {"axioms_consumed", axioms},
         {"exit_code", r.exit_code}};
  if (r.timing) j["timing"] = *r.timing;
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    if (j.empty()) out << csv_field(path) << ",{}\n";
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    if (j.empty()) out << csv_field(path) << ",[]\n";
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
  } else {
    out << csv_field(path) << ',' << csv_field(j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

std::set<std::string> ledger_axioms(const VanishingLedger& l) {
  std::set<std::string> out;
  for (const auto& [gn, s] : l.entries())
    if (s.kind == VanishingStatus::Kind::Vanishes && s.provenance.kind == Provenance::Kind::Axiom)
      out.insert(s.provenance.detail);
  return out;
}

void tally_axioms(const certify::CertPtr& c, std::set<const certify::Certificate*>& seen, std::set<std::string>& tags,
                  std::map<std::string, std::size_t>& leaves) {
  if (!seen.insert(c.get()).second) return;
  if (c->axiom) {
    tags.insert(*c->axiom);
    ++leaves[*c->axiom];
  } else if (c->children.empty()) {
    ++leaves[c->rule];
  }
  for (const auto& ch : c->children) tally_axioms(ch, seen, tags, leaves);
}

Json graph_json(const graphs::StableGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back({e[0], e[1]});
  return {{"key", graphs::canonical_key(g)}, {"genera", g.genera}, {"legs", g.leg_vertex}, {"edges", edges}};
}

std::vector<std::string> integers(const std::vector<Integer>& v, std::size_t from) {
  std::vector<std::string> out;
  for (std::size_t i = from; i < v.size(); ++i) out.push_back(v[i].get_str());
  return out;
}

void write_matrix_param(const Invocation& inv, const ratlin::SparseMat& m, Json& results) {
  if (!inv.parameters.contains("matrix")) return;
  const std::string path = inv.parameters.at("matrix");
  ratlin::write_matrix_file(path, m);
  results["matrices"] = Json::array({path});
}

VanishingLedger load_ledger(const std::string& path) {
  Json j = read_json_file(path);
  if (j.is_object() && j.contains("ledger")) return ledger_from_json(j.at("ledger"));
  return ledger_from_json(j);
}

}  // namespace

std::string csv_flatten(const Json& j) {
  std::ostringstream out;
  out << "path,value\n";
  flatten(j, "", out);
  return out.str();
}

Report execute(const Invocation& inv) {
  const auto start = std::chrono::steady_clock::now();
  const Json& p = inv.parameters;
  auto i = [&](const char* k) { return static_cast<int>(p.at(k).get<std::int64_t>()); };
  Report r;
  r.command = {{"name", to_string(inv.command)}, {"action", inv.action}};
  r.parameters = p;
  Json res = Json::object();
  std::set<std::string> axioms;

  complex11::Options copt;
  copt.threads = inv.threads;
  copt.rank.modular_precheck = inv.modular_precheck;
  certify::VerifyOptions vopt;
  vopt.complex = copt;
  vopt.keep_in_memory = false;

  switch (inv.command) {
    case Command::Graphs: {
      const int g = i("genus"), n = i("markings");
      const std::string e = p.at("edges");
      auto list = e == "1" ? graphs::enumerate_one_edge(g, n)
                           : e == "2" ? graphs::enumerate_two_edge(g, n) : graphs::enumerate_stable_trees(n);
      Json arr = Json::array();
      for (const auto& gr : list) arr.push_back(graph_json(gr));
      res = {{"count", list.size()}, {"graphs", arr}};
      break;
    }
    case Command::H11: {
      const int g = i("genus"), n = i("markings");
      VanishingLedger ledger;
      if (g >= 2) {
        auto prep = certify::prepare_ledger(g, n, vopt);
        ledger = prep.ledger;
        certify::verify_h11(g, n, ledger, vopt);
      }
      auto s = ledger.status(g, n);
      res = to_json(s);
      res["dim"] = s.kind == VanishingStatus::Kind::Nonzero ? s.dimension : 0;
      if (g == 0) axioms.insert("Keel");
      if (g == 1 && n <= 10) axioms.insert("genus-1 formula");
      for (const auto& a : ledger_axioms(ledger)) axioms.insert(a);
      break;
    }
    case Command::Alpha: {
      const int n = i("markings");
      VanishingLedger ledger;
      auto m = complex11::build_alpha(n, ledger, inv.threads);
      auto rk = ratlin::rank_with_stats(m, copt.rank);
      const std::size_t expected = n >= 11 ? specht::binom64(n - 1, 10) : 0;
      res = {{"rows", m.rows()},
             {"cols", m.cols()},
             {"rank", rk.rank},
             {"expected_dim", expected},
             {"injective", rk.rank == m.cols()},
             {"elimination", to_json(rk.exact_stats)}};
      write_matrix_param(inv, m, res);
      if (rk.rank != m.cols()) r.exit_code = exit_code::kVerificationFailure;
      break;
    }
    case Command::Beta: {
      const int g = i("genus"), n = i("markings");
      VanishingLedger ledger;
      if (p.contains("ledger")) ledger = load_ledger(p.at("ledger"));
      else if (g >= 2) ledger = certify::prepare_ledger(g, n, vopt).ledger;
      ledger.set_frontier(std::pair(g, n));
      const bool keep = p.contains("matrix");
      auto rep = complex11::check_beta_injective(g, n, ledger, copt, keep);
      std::optional<ratlin::SparseMat> mat = std::move(rep.matrix);
      rep.matrix.reset();
      res = to_json(rep);
      if (mat) write_matrix_param(inv, *mat, res);
      if (!rep.injective) r.exit_code = exit_code::kVerificationFailure;
      if (p.at("block_order").get<bool>()) {
        try {
          res["block_order"] = to_json(complex11::block_order(g, n, ledger, copt));
          if (!res["block_order"]["all_injective"].get<bool>()) r.exit_code = exit_code::kVerificationFailure;
        } catch (const complex11::OrderingFailed& e) {
          res["block_order"] = to_json(e.report);
          res["block_order"]["error"] = e.what();
          r.exit_code = exit_code::kVerificationFailure;
        } catch (const std::invalid_argument& e) {
          res["block_order"] = {{"error", e.what()}};
          r.exit_code = exit_code::kVerificationFailure;
        }
      }
      for (const auto& a : ledger_axioms(ledger)) axioms.insert(a);
      break;
    }
    case Command::Sweep: {
      const std::string dir = *inv.out;
      vopt.bundle_dir = dir;
      try {
        auto sw = certify::sweep_h11(i("gmax"), i("nmax"), vopt);
        certify::write_bundle(dir, sw);
        Json events = Json::array();
        for (const auto& e : sw.events) events.push_back({{"g", e.g}, {"n", e.n}, {"message", e.message}});
        Json roots = Json::array();
        for (const auto& c : sw.certificates)
          roots.push_back({{"g", c->claim.g}, {"n", c->claim.n}, {"rule", c->rule}, {"hash", certify::certificate_hash(*c)}});
        bool all_vanish = true;
        for (const auto& [gn, s] : sw.ledger.entries()) all_vanish = all_vanish && s.is_vanishes();
        res = {{"bundle", dir},
               {"ledger", ledger_to_json(sw.ledger)},
               {"events", events},
               {"certificates", roots},
               {"all_genus_ge2_vanish", all_vanish}};
        if (!p.at("no_replay").get<bool>()) {
          auto rp = certify::replay_bundle(dir, copt.rank);
          res["replay"] = {{"ok", rp.ok}, {"nodes", rp.nodes}, {"rank_checks", rp.rank_checks}, {"errors", rp.errors}};
          if (!rp.ok) r.exit_code = exit_code::kVerificationFailure;
        }
        for (const auto& a : ledger_axioms(sw.ledger)) axioms.insert(a);
      } catch (const certify::BetaNotInjective& e) {
        res = {{"error", e.what()}, {"report", to_json(e.report)}};
        r.exit_code = exit_code::kVerificationFailure;
      }
      break;
    }
    case Command::Purity: {
      auto c = certify::purity_certificate(i("genus"), i("markings"), i("degree"));
      auto rp = certify::replay(c);
      std::set<const certify::Certificate*> seen;
      std::map<std::string, std::size_t> leaves;
      tally_axioms(c, seen, axioms, leaves);
      res = {{"root", certify::certificate_hash(*c)},
             {"rule", c->rule},
             {"nodes", seen.size()},
             {"leaves", leaves},
             {"replay", {{"ok", rp.ok}, {"nodes", rp.nodes}, {"errors", rp.errors}}}};
      if (p.at("tree").get<bool>()) res["tree"] = certify::tree_json(*c);
      if (!rp.ok) r.exit_code = exit_code::kVerificationFailure;
      break;
    }
    case Command::Count: {
      if (inv.action == "approx") {
        auto h = parse_betti(p.at("betti"));
        count::BettiTable t;
        for (int k = 0; k < 7; ++k) t.h[k] = h[k];
        t.d = i("dim");
        try {
          t.validate();
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        res = {{"value", count::approx_count(t, Integer(i("q"))).get_str()},
               {"inputs", {{"betti", p.at("betti")}, {"dim", t.d}, {"q", i("q")}}}};
      } else if (inv.action == "m0bar") {
        const int n = i("n");
        const Integer q(i("q"));
        res = {{"value", count::m0bar_count(n, q, inv.threads).get_str()},
               {"inputs", {{"n", n}, {"q", i("q")}}},
               {"strata", graphs::enumerate_stable_trees(n).size()},
               {"some_strata_empty", count::m0_open_count(n, q).some_strata_empty}};
      } else {
        auto t = count::tau_expansion(i("upto"));
        res = {{"value", t.back().get_str()}, {"coefficients", integers(t, 0)}, {"inputs", {{"upto", i("upto")}}}};
      }
      break;
    }
    case Command::Tau: {
      auto t = count::tau_expansion(i("upto"));
      res = {{"value", t.back().get_str()}, {"coefficients", integers(t, 0)}, {"inputs", {{"upto", i("upto")}}}};
      break;
    }
    case Command::Genfun: {
      const int N = i("upto");
      auto c = count::s12_multiplicity_series(N);
      Json coeffs = Json::object();
      bool match = true;
      for (int n = 1; n <= N; ++n) {
        coeffs[std::to_string(n)] = c[n].get_str();
        match = match && c[n] == (n >= 11 ? binomial(n - 1, 10) : Integer(0));
      }
      res = {{"coefficients", coeffs}, {"matches_binomial", match}, {"inputs", {{"upto", N}}}};
      if (!match) r.exit_code = exit_code::kVerificationFailure;
      break;
    }
  }
  r.results = std::move(res);
  r.axioms_consumed.assign(axioms.begin(), axioms.end());
  if (inv.timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    r.timing = Json{{"elapsed_ms", ms.count()}, {"threads", inv.threads}};
  }
  return r;
}

int emit_report(const Report& r, const Invocation& inv) {
  const Json j = report_json(r);
  const std::string text = inv.format == Format::Csv ? csv_flatten(j) : j.dump(2) + "\n";
  std::optional<std::string> path = inv.out;
  if (inv.command == Command::Sweep && path) {
    path = (fs::path(*path) / (inv.format == Format::Csv ? "report.csv" : "report.json")).string();
    std::cout << text;
  }
  if (!path) {
    std::cout << text;
    std::cout.flush();
    return std::cout ? r.exit_code : exit_code::kIo;
  }
  std::ofstream out(*path);
  if (!out) {
    std::cerr << "weight11: cannot write " << *path << '\n';
    return exit_code::kIo;
  }
  out << text;
  out.close();
  if (!out) {
    std::cerr << "weight11: write failed for " << *path << '\n';
    return exit_code::kIo;
  }
  return r.exit_code;
}

int run(const std::vector<std::string>& argv) {
  if (argv.empty() || argv[0] == "--help" || argv[0] == "-h" || argv[0] == "help") {
    (argv.empty() ? std::cerr : std::cout) << usage();
    return argv.empty() ? exit_code::kUsage : exit_code::kOk;
  }
  Invocation inv;
  try {
    inv = parse_invocation(argv);
  } catch (const UsageError& e) {
    std::cerr << "weight11: " << e.what() << "\n\n" << usage();
    return exit_code::kUsage;
  }
  try {
    Report r = execute(inv);
    return emit_report(r, inv);
  } catch (const UsageError& e) {
    std::cerr << "weight11: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const ratlin::InconsistencyError& e) {
    std::cerr << "weight11: inconsistency: " << e.what() << '\n';
    return exit_code::kInconsistency;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "weight11: I/O error: " << e.what() << '\n';
    return exit_code::kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "weight11: I/O error: " << e.what() << '\n';
    return exit_code::kIo;
  } catch (const certify::PrerequisiteUnknown& e) {
    std::cerr << "weight11: " << e.what() << '\n';
    return exit_code::kVerificationFailure;
  } catch (const std::exception& e) {
    std::cerr << "weight11: internal error: " << e.what() << '\n';
    return exit_code::kInconsistency;
  }
}

}  // namespace w11::cli
