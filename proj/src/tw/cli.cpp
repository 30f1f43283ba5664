#include "tw/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tw/dsl.hpp"
#include "tw/oracle.hpp"
#include "tw/specker.hpp"

namespace tw {

namespace {

struct Options {
  std::string format = "plain";
  std::vector<std::string> cardinals;
};

bool structured(const Options& o) { return o.format == "structured"; }

void declare_cardinals(Session& s, const Options& o) {
  for (const std::string& spec : o.cardinals) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    std::optional<int> rank;
    if (colon != std::string::npos) rank = std::stoi(spec.substr(colon + 1));
    s.atoms.declare(name, rank);
  }
}

PatternFamily parse_family(const std::string& src, const Session& s) {
  Term t = parse_expr(src, s);
  if (const auto* g = std::get_if<GenSeqT>(&t->node)) {
    if (g->fun.kind == LetterFun::Kind::canonical && g->start.is_zero()) {
      if (auto a = g->bound.as_single_atom()) return PatternFamily::canonical(*a);
    }
  }
  auto from_rep = [&](const Term& block, bool chunked) -> std::optional<PatternFamily> {
    const auto* g = std::get_if<GenSeqT>(&block->node);
    if (!g) return std::nullopt;
    auto a = g->bound.as_single_atom();
    if (!a || !g->start.is_zero()) return std::nullopt;
    GDescription d = g->fun.kind == LetterFun::Kind::bits ? g->fun.desc : GDescription{};
    return PatternFamily::bits(std::move(d), *a, chunked);
  };
  if (const auto* r = std::get_if<RepDisjointT>(&t->node))
    if (auto f = from_rep(r->block, true)) return *f;
  if (const auto* r = std::get_if<RepLiteralT>(&t->node))
    if (auto f = from_rep(r->block, false)) return *f;
  fail(Errc::parse, "family must be Mk(<cardinal>) or Mg(<bits>)");
}

int cmd_reduce(const Options& o, const std::string& expr, std::ostream& out) {
  Session s;
  declare_cardinals(s, o);
  Word w = reduce(parse_expr(expr, s), s);
  std::string printed = print_word(w, s);
  if (structured(o)) {
    nlohmann::json j;
    j["reduced"] = printed;
    out << j.dump() << "\n";
  } else {
    out << printed << "\n";
  }
  return 0;
}

int cmd_phi(const Options& o, const std::string& family, const std::string& expr,
            std::ostream& out) {
  Session s;
  declare_cardinals(s, o);
  PatternFamily fam = parse_family(family, s);
  Term t = parse_expr(expr, s);
  auto rep = validate_word(t, s);
  if (!rep.valid) fail(Errc::validation, rep.violations.front().message);
  Word w = reduce(t, s);
  OccReport occ = class_count(w, fam, s);
  long long phi = static_cast<long long>(occ.plus) - static_cast<long long>(occ.minus);
  if (structured(o)) {
    nlohmann::json j = nlohmann::json::parse(occ_report_json(occ));
    j["phi"] = phi;
    out << j.dump() << "\n";
  } else {
    out << phi << "\n";
  }
  return 0;
}

int cmd_witness(const Options& o, const std::string& kappa, const std::vector<std::string>& ords,
                std::ostream& out) {
  Session s;
  declare_cardinals(s, o);
  auto a = s.atoms.find(kappa);
  if (!a) fail(Errc::undeclared_atom, "undeclared cardinal '" + kappa + "'");
  std::vector<Ord> F;
  for (const std::string& src : ords) F.push_back(parse_ord(src, s));
  WitnessReport r = specker_witness(F, *a, s);
  out << (structured(o) ? witness_json(r, s) + "\n" : witness_lines(r, s));
  return 0;
}

int cmd_star(const Options& o, const std::string& bits_a, const std::string& bits_b,
             std::ostream& out) {
  Session s;
  declare_cardinals(s, o);
  PatternFamily a = PatternFamily::bits(parse_bits(bits_a, s), s.atoms.L());
  PatternFamily b = PatternFamily::bits(parse_bits(bits_b, s), s.atoms.L());
  bool star = star_check(a, b);
  if (structured(o)) {
    nlohmann::json j;
    j["star"] = star;
    out << j.dump() << "\n";
  } else {
    out << "star=" << (star ? "true" : "false") << "\n";
  }
  return 0;
}

int cmd_matrix(const Options& o, const std::string& path, std::ostream& out) {
  Session s;
  declare_cardinals(s, o);
  std::ifstream in(path);
  if (!in) fail(Errc::domain, "cannot open family-spec file '" + path + "'");
  std::vector<SpeckerHom> homs;
  std::vector<PatternFamily> current;
  std::string line;
  auto flush = [&] {
    if (!current.empty()) homs.push_back(SpeckerHom::make(std::move(current)));
    current.clear();
  };
  while (std::getline(in, line)) {
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      flush();
      continue;
    }
    size_t e = line.find_last_not_of(" \t\r");
    current.push_back(
        PatternFamily::bits(parse_bits(line.substr(b, e - b + 1), s), s.atoms.L()));
  }
  flush();
  if (homs.empty()) fail(Errc::domain, "family-spec file defines no index sets");
  auto m = hom_matrix(homs, s);
  if (structured(o)) {
    nlohmann::json j;
    j["columns"] = nlohmann::json::array();
    for (const auto& c : hom_matrix_columns(homs)) j["columns"].push_back(print_bits(c.desc));
    j["rows"] = m;
    out << j.dump() << "\n";
  } else {
    for (const auto& row : m) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
      out << "\n";
    }
  }
  return 0;
}

int cmd_oracle(const Options& o, const TrialConfig& cfg, std::ostream& out) {
  auto results = run_agreement_trials(cfg);
  if (structured(o)) {
    nlohmann::json j;
    j["trials"] = nlohmann::json::array();
    Nat bad = 0;
    for (const auto& r : results) {
      j["trials"].push_back({{"seed", r.seed}, {"n", r.n}, {"agree", r.agree}});
      if (!r.agree) ++bad;
    }
    j["total"] = results.size();
    j["disagreements"] = bad;
    out << j.dump() << "\n";
  } else {
    out << trial_report(results);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"transfinite words over free products: reduction and occurrence counting"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"plain", "structured"}))
      ->capture_default_str();
  app.add_option("--cardinal", opt.cardinals,
                 "declare a regular uncountable cardinal, name[:rank]; repeatable");

  std::string expr, family, kappa = "k1", bits_a, bits_b, path;
  std::vector<std::string> ords;
  TrialConfig cfg;
  bool serial = false;

  auto* c_reduce = app.add_subcommand("reduce", "print the canonical reduced form");
  c_reduce->add_option("expr", expr)->required();

  auto* c_phi = app.add_subcommand("phi", "occurrence-count homomorphism value");
  c_phi->add_option("--family", family, "Mk(<cardinal>) or Mg(<bits>)")->required();
  c_phi->add_option("expr", expr)->required();

  auto* c_witness =
      app.add_subcommand("witness", "tail past a finite set: empty restriction, phi 1");
  c_witness->add_option("--kappa", kappa, "regular uncountable cardinal")->capture_default_str();
  c_witness->add_option("ords", ords, "elements of the finite coordinate set");

  auto* c_star = app.add_subcommand("star", "separation check of two bit descriptions");
  c_star->add_option("bits_a", bits_a)->required();
  c_star->add_option("bits_b", bits_b)->required();

  auto* c_matrix = app.add_subcommand("matrix", "phi values of index-set homomorphisms");
  c_matrix->add_option("file", path, "bit descriptions, blank-line separated index sets")
      ->required();

  auto* c_oracle = app.add_subcommand("oracle", "randomized brute-force agreement trials");
  c_oracle->add_option("--trials", cfg.trials)->capture_default_str();
  c_oracle->add_option("--seed", cfg.seed0)->capture_default_str();
  c_oracle->add_option("--max-word", cfg.max_word)->capture_default_str();
  c_oracle->add_option("--max-pattern", cfg.max_pattern)->capture_default_str();
  c_oracle->add_flag("--serial", serial, "disable the parallel batch runner");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (c_reduce->parsed()) return cmd_reduce(opt, expr, out);
    if (c_phi->parsed()) return cmd_phi(opt, family, expr, out);
    if (c_witness->parsed()) return cmd_witness(opt, kappa, ords, out);
    if (c_star->parsed()) return cmd_star(opt, bits_a, bits_b, out);
    if (c_matrix->parsed()) return cmd_matrix(opt, path, out);
    if (c_oracle->parsed()) {
      cfg.parallel = !serial;
      return cmd_oracle(opt, cfg, out);
    }
    err << "error: no subcommand\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::parse:
      case Errc::undeclared_atom:
        return 1;
      case Errc::validation:
      case Errc::not_regular_uncountable:
      case Errc::not_uncountable:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace tw
