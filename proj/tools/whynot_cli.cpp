// whynot: validate data, run queries, explain missing answers.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "whynot/concept.hpp"
#include "whynot/error.hpp"
#include "whynot/evaluate.hpp"
#include "whynot/explain.hpp"
#include "whynot/instance.hpp"
#include "whynot/obda.hpp"
#include "whynot/ontology.hpp"
#include "whynot/schema.hpp"

using namespace whynot;

namespace {

enum Exit {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kConstraint = 3,
  kUnsupported = 4,
  kNoSolution = 5,
  kNoExplanation = 6,
  kBudget = 7,
  kPresent = 8,
};

struct Options {
  std::string schema, data, query, tuple, ontology, obda, derive, fragment, format = "text";
  bool all = false, shortest = false, minimize = false, card = false, verify_ans = false, check = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::size_t budget_from_env(std::size_t fallback) {
  const char* v = std::getenv("WHYNOT_BUDGET");
  if (!v || !*v) return fallback;
  try {
    return static_cast<std::size_t>(std::stoull(v));
  } catch (const std::exception&) {
    throw UsageError(std::string("WHYNOT_BUDGET must be a positive integer, got '") + v + "'");
  }
}

std::shared_ptr<const Schema> load_schema_ptr(const Options& o) {
  return std::make_shared<const Schema>(load_schema_file(o.schema));
}

UnionQuery read_query(const Options& o) {
  std::string text = o.query;
  if (!text.empty() && text.front() == '@') text = read_text_file(text.substr(1));
  else if (text.find(":-") == std::string::npos && std::filesystem::exists(text)) text = read_text_file(text);
  return parse_query(text);
}

// Comma-separated constants; double quotes protect commas.
Tuple parse_tuple(const std::string& text) {
  Tuple out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  auto flush = [&] {
    out.push_back(was_quoted ? Constant::text(cur) : Constant::parse(trim(cur)));
    cur.clear();
    was_quoted = false;
  };
  for (char ch : text) {
    if (ch == '"') {
      quoted = !quoted;
      was_quoted = true;
    } else if (ch == ',' && !quoted) {
      flush();
    } else if (quoted || !(was_quoted && std::isspace(static_cast<unsigned char>(ch)))) {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quote in tuple '" + text + "'");
  if (!text.empty()) flush();
  return out;
}

nlohmann::json constant_json(const Constant& c) {
  if (c.is_number()) return c.as_number();
  return c.as_text();
}

std::string bracket(const std::vector<std::string>& parts) {
  std::string s = "⟨";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
  return s + "⟩";
}

int cmd_validate(const Options& o) {
  auto schema = load_schema_ptr(o);
  try {
    auto inst = load_instance_dir(schema, o.data);
    ValidationReport rep = validate_constraints(*schema, inst.data());
    if (o.format == "json") {
      nlohmann::json j = {{"ok", true}, {"relations", nlohmann::json::object()}};
      for (const auto& r : schema->relations()) j["relations"][r.name] = inst.tuples(r.name).size();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << rep.str();
      for (const auto& r : schema->relations())
        std::cout << r.name << ": " << inst.tuples(r.name).size() << " tuples\n";
      std::cout << "ok\n";
    }
    return kOk;
  } catch (const ConstraintViolation& e) {
    if (o.format == "json") {
      nlohmann::json j = {{"ok", false}, {"failures", nlohmann::json::array()}};
      for (const auto& c : e.report().checks) {
        if (c.passed) continue;
        nlohmann::json w = nlohmann::json::array();
        for (const auto& t : c.witnesses) {
          nlohmann::json row = nlohmann::json::array();
          for (const auto& v : t) row.push_back(constant_json(v));
          w.push_back(row);
        }
        j["failures"].push_back({{"constraint", c.constraint}, {"witnesses", w}});
      }
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << e.report().str();
    }
    return kConstraint;
  }
}

int cmd_query(const Options& o) {
  auto schema = load_schema_ptr(o);
  auto inst = load_instance_dir(schema, o.data);
  auto ans = evaluate(read_query(o), inst);
  if (o.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : ans) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& v : t) row.push_back(constant_json(v));
      j.push_back(row);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& t : ans) std::cout << to_string(t) << "\n";
    std::cout << ans.size() << " answer(s)\n";
  }
  return kOk;
}

int sources(const Options& o) { return !o.ontology.empty() + !o.obda.empty() + !o.derive.empty(); }

// A finite ontology from --ontology / --obda, or a materialized derived one.
struct FiniteSource {
  std::unique_ptr<FiniteOntology> onto;
  const ConceptOntology* concepts = nullptr;  // set when derived
};

Fragment fragment_or(const Options& o, Fragment fallback) {
  return o.fragment.empty() ? fallback : parse_fragment(o.fragment);
}

FiniteSource finite_source(const Options& o, const Instance& inst, const ConstantSet& pool) {
  FiniteSource s;
  if (!o.ontology.empty()) {
    s.onto = std::make_unique<FileOntology>(load_ontology_file(o.ontology, inst.schema()));
    return s;
  }
  if (!o.obda.empty()) {
    auto spec = std::make_shared<const ObdaSpec>(load_obda_file(o.obda, inst.schema_ptr()));
    auto check = check_solution_exists(*spec, inst);
    if (!check.exists) throw NoSolution("no solution: " + check.violations.front());
    s.onto = std::make_unique<ObdaOntology>(spec);
    return s;
  }
  const std::size_t budget = budget_from_env(1'000'000);
  if (o.derive == "instance") {
    auto f = fragment_or(o, Fragment::Minimal);
    auto c = std::make_unique<ConceptOntology>(ConceptOntology::instance_order(
        enumerate_concepts(f, inst.schema(), pool, inst.data(), budget), inst));
    s.concepts = c.get();
    s.onto = std::move(c);
    return s;
  }
  if (o.derive == "schema") {
    auto f = fragment_or(o, Fragment::Minimal);
    if (f != Fragment::Minimal)
      throw UsageError("showing the schema-derived ontology supports --fragment minimal only");
    auto c = std::make_unique<ConceptOntology>(ConceptOntology::schema_order(
        enumerate_atomic_concepts(f, inst.schema(), pool, inst.data(), Dedup::Syntactic, budget), inst.schema()));
    s.concepts = c.get();
    s.onto = std::move(c);
    return s;
  }
  throw UsageError("--derive must be 'instance' or 'schema'");
}

struct Found {
  std::vector<std::vector<std::string>> labels;
  std::vector<std::vector<Extension>> exts;
  std::vector<ConceptExplanation> concepts;  // when the explanations are concept expressions
  std::vector<Explanation> indices;          // when drawn from a finite ontology
};

int cmd_explain(const Options& o) {
  if (sources(o) != 1) throw UsageError("give exactly one of --ontology, --obda, --derive");
  if (o.shortest + o.card + o.all > 1) throw UsageError("--all, --shortest and --card are exclusive");
  auto schema = load_schema_ptr(o);
  auto inst = load_instance_dir(schema, o.data);
  auto query = read_query(o);
  auto tuple = parse_tuple(o.tuple);
  std::optional<TupleSet> ans;
  if (!o.verify_ans) ans = evaluate(query, inst);
  auto w = WhyNotInstance::create(inst, query, tuple, ans, /*trusted=*/!o.verify_ans);
  const std::size_t budget = budget_from_env(10'000'000);

  Found found;
  std::unique_ptr<FiniteOntology> keep;
  const FiniteOntology* finite = nullptr;
  const ConceptOntology* as_concepts = nullptr;
  Fragment frag = fragment_or(o, Fragment::SelectionFree);

  bool incremental = o.derive == "instance" && !o.all && !o.shortest && !o.card && allows_intersection(frag);
  if (o.derive == "schema") {
    auto f = fragment_or(o, Fragment::Minimal);
    if (o.shortest || o.card) {
      auto onto = std::make_unique<ConceptOntology>(schema_candidates(w, f, budget_from_env(100'000)));
      as_concepts = onto.get();
      finite = onto.get();
      keep = std::move(onto);
    } else {
      auto mges = compute_mge_schema(w, f, budget_from_env(100'000));
      if (!o.all && !mges.empty()) mges.resize(1);
      found.concepts = std::move(mges);
    }
  } else if (incremental) {
    found.concepts.push_back(incremental_mge(w, frag));
  } else {
    auto src = finite_source(o, inst, w.pool());
    keep = std::move(src.onto);
    finite = keep.get();
    as_concepts = src.concepts;
  }

  if (finite) {
    if (o.minimize && !as_concepts) throw UsageError("--minimize needs concept-language explanations");
    std::vector<Explanation> picked;
    if (o.shortest) {
      if (auto e = shortest_mge(w, *finite, budget)) picked.push_back(*e);
    } else if (o.card) {
      if (auto e = card_maximal_explanation(w, *finite, budget)) picked.push_back(*e);
    } else {
      picked = exhaustive_mge(w, *finite, budget);
      if (!o.all && !picked.empty()) picked.resize(1);
    }
    for (const auto& e : picked) {
      if (as_concepts) {
        ConceptExplanation ce;
        for (auto i : e) ce.push_back(as_concepts->concept_at(i));
        found.concepts.push_back(std::move(ce));
      } else {
        found.indices.push_back(e);
      }
    }
  }
  if (o.minimize)
    for (auto& ce : found.concepts) ce = minimize_explanation(ce, inst);

  for (const auto& ce : found.concepts) {
    std::vector<std::string> l;
    std::vector<Extension> x;
    for (const auto& c : ce) {
      l.push_back(c.str());
      x.push_back(extension(c, inst));
    }
    found.labels.push_back(std::move(l));
    found.exts.push_back(std::move(x));
  }
  for (const auto& e : found.indices) {
    std::vector<std::string> l;
    std::vector<Extension> x;
    for (auto i : e) {
      l.push_back(finite->label(i));
      x.push_back(finite->extension(i, inst));
    }
    found.labels.push_back(std::move(l));
    found.exts.push_back(std::move(x));
  }
  if (found.labels.empty()) {
    if (o.format == "json") std::cout << to_json(ExplanationReport{}) << "\n";
    else std::cout << "no explanation\n";
    return kNoExplanation;
  }

  // Self-check: every printed explanation must still be one.
  for (const auto& x : found.exts)
    if (!is_explanation(x, w)) throw Error("internal error: produced a non-explanation");
  std::vector<bool> checked;
  if (o.check) {
    for (const auto& ce : found.concepts) {
      bool ok = true;
      if (o.derive == "instance") {
        bool closed = allows_intersection(frag);
        ok = closed ? check_mge_instance(w, ce, frag) : true;
      }
      checked.push_back(ok);
    }
    for (const auto& e : found.indices) checked.push_back(check_mge(w, *finite, e));
  }

  ExplanationReport rep{found.labels, found.exts, {}};
  for (std::size_t a = 0; a < found.labels.size(); ++a)
    for (std::size_t b = a + 1; b < found.labels.size(); ++b) {
      Generality g;
      if (!found.indices.empty()) g = compare_generality(found.indices[a], found.indices[b], *finite);
      else if (o.derive == "schema") g = compare_generality_schema(found.concepts[a], found.concepts[b], *schema);
      else g = compare_generality(found.concepts[a], found.concepts[b], inst);
      rep.generality.push_back({a, b, g});
    }

  if (o.format == "json") {
    auto j = nlohmann::json::parse(to_json(rep));
    if (o.check) j["check"] = checked;
    std::cout << j.dump(2) << "\n";
  } else {
    for (std::size_t k = 0; k < found.labels.size(); ++k) {
      std::cout << bracket(found.labels[k]) << "\n";
      for (std::size_t i = 0; i < found.labels[k].size(); ++i)
        std::cout << "  " << found.labels[k][i] << " = " << found.exts[k][i].str() << "\n";
      if (o.check) std::cout << "  check: " << (checked[k] ? "most general" : "NOT most general") << "\n";
    }
    for (const auto& g : rep.generality)
      std::cout << "#" << g.left << " vs #" << g.right << ": " << to_string(g.relation) << "\n";
  }
  if (o.check && std::find(checked.begin(), checked.end(), false) != checked.end()) return kOther;
  return kOk;
}

int cmd_ontology_show(const Options& o) {
  if (sources(o) != 1) throw UsageError("give exactly one of --ontology, --obda, --derive");
  auto schema = load_schema_ptr(o);
  auto inst = load_instance_dir(schema, o.data);
  auto pool = inst.active_domain();
  auto src = finite_source(o, inst, pool);
  const auto& onto = *src.onto;
  auto ext = onto.extensions(inst);
  if (o.format == "json") {
    nlohmann::json j = {{"concepts", nlohmann::json::array()}, {"subsumptions", nlohmann::json::array()}};
    for (std::size_t i = 0; i < onto.size(); ++i) {
      nlohmann::json members;
      if (ext[i].all) members = "*";
      else {
        members = nlohmann::json::array();
        for (const auto& c : ext[i].members) members.push_back(constant_json(c));
      }
      j["concepts"].push_back({{"label", onto.label(i)}, {"extension", members}});
    }
    for (std::size_t a = 0; a < onto.size(); ++a)
      for (std::size_t b = 0; b < onto.size(); ++b)
        if (a != b && onto.subsumed(a, b)) j["subsumptions"].push_back({onto.label(a), onto.label(b)});
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << onto.size() << " concepts\n";
  for (std::size_t i = 0; i < onto.size(); ++i) std::cout << "  " << onto.label(i) << " = " << ext[i].str() << "\n";
  std::cout << "subsumptions:\n";
  for (std::size_t a = 0; a < onto.size(); ++a)
    for (std::size_t b = 0; b < onto.size(); ++b)
      if (a != b && onto.subsumed(a, b)) std::cout << "  " << onto.label(a) << " <= " << onto.label(b) << "\n";
  auto cons = check_consistency(onto, inst);
  std::cout << (cons.consistent ? "consistent with the instance\n" : "NOT consistent with the instance\n");
  return kOk;
}

void add_data_options(CLI::App* app, Options& o) {
  app->add_option("--schema", o.schema, "schema JSON file")->required()->check(CLI::ExistingFile);
  app->add_option("--data", o.data, "directory with one CSV per relation")->required()->check(CLI::ExistingDirectory);
  app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
}

void add_ontology_options(CLI::App* app, Options& o) {
  app->add_option("--ontology", o.ontology, "external ontology JSON")->check(CLI::ExistingFile);
  app->add_option("--obda", o.obda, "TBox and mappings JSON")->check(CLI::ExistingFile);
  app->add_option("--derive", o.derive, "derive the ontology from the instance or the schema")
      ->check(CLI::IsMember({"instance", "schema"}));
  app->add_option("--fragment", o.fragment, "minimal | selection-free | intersection-free | full");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"why-not explanations over relational data"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "check an instance against its schema");
  add_data_options(validate, o);

  auto* query = app.add_subcommand("query", "evaluate a query");
  add_data_options(query, o);
  query->add_option("--query", o.query, "query text, @file, or a file path")->required();

  auto* explain = app.add_subcommand("explain", "explain why a tuple is missing from a query answer");
  add_data_options(explain, o);
  add_ontology_options(explain, o);
  explain->add_option("--query", o.query, "query text, @file, or a file path")->required();
  explain->add_option("--tuple", o.tuple, "missing tuple, comma separated")->required();
  explain->add_flag("--all", o.all, "every most-general explanation");
  explain->add_flag("--shortest", o.shortest, "a most-general explanation of least length");
  explain->add_flag("--card", o.card, "an explanation with the largest extensions");
  explain->add_flag("--minimize", o.minimize, "drop redundant conjuncts");
  explain->add_flag("--verify-ans", o.verify_ans, "recompute and compare the answer set");
  explain->add_flag("--check", o.check, "re-verify that outputs are most general");

  auto* ontology = app.add_subcommand("ontology", "inspect ontologies");
  ontology->require_subcommand(1);
  auto* show = ontology->add_subcommand("show", "universe, subsumptions and extensions");
  add_data_options(show, o);
  add_ontology_options(show, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (query->parsed()) return cmd_query(o);
    if (explain->parsed()) return cmd_explain(o);
    if (show->parsed()) return cmd_ontology_show(o);
    return kParse;
  } catch (const TuplePresent& e) {
    std::cout << "tuple is present\n";
    std::cerr << e.what() << "\n";
    return kPresent;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kParse;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kParse;
  } catch (const ConstraintViolation& e) {
    std::cerr << "constraint violation:\n" << e.report().str();
    return kConstraint;
  } catch (const UnsupportedConstraintClass& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const NoSolution& e) {
    std::cerr << e.what() << "\n";
    return kNoSolution;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << " (raise WHYNOT_BUDGET)\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
