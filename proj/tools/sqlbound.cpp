#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sqlbound/driver.hpp"
#include "sqlbound/encoder.hpp"
#include "sqlbound/errors.hpp"
#include "sqlbound/frontend.hpp"
#include "sqlbound/inference.hpp"

namespace fs = std::filesystem;
using namespace sqlbound;

namespace {

struct Flags {
  std::string problem;
  std::string corpus;
  std::optional<int> bound;
  std::optional<int> max_bound;
  std::optional<std::int64_t> timeout_ms;
  std::string dump_dir;
  std::string format = "text";
  bool annotations = false;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ResolveError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string render_value(const Value& v, AttrType type, const StringTable& strings) {
  if (v.is_null()) return "NULL";
  if (type == AttrType::Bool) return v.as_bool() ? "true" : "false";
  if (auto s = strings.lookup(v.as_int())) return "'" + *s + "'";
  return std::to_string(v.as_int());
}

void print_text(std::ostream& os, const VerificationResult& r, const Problem& p) {
  os << to_string(r.status);
  if (r.status == Status::Checked || r.status == Status::Refuted) os << " at bound " << r.bound;
  os << " (encode " << static_cast<long>(r.timings.encode_ms) << " ms, solve " << static_cast<long>(r.timings.solve_ms)
     << " ms)\n";
  if (!r.reason.empty()) os << "reason: " << r.reason << "\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  if (!r.counterexample) return;
  os << "counterexample:\n";
  for (const auto& rel : p.schema.relations()) {
    os << "  " << rel.name << "(";
    for (std::size_t k = 0; k < rel.attrs.size(); ++k) os << (k ? ", " : "") << rel.attrs[k].name;
    os << ")\n";
    auto f = r.counterexample->db.find(rel.name);
    if (f == r.counterexample->db.end()) continue;
    for (const auto& row : f->second) {
      os << "    (";
      for (std::size_t k = 0; k < row.size(); ++k)
        os << (k ? ", " : "") << render_value(row[k], rel.attrs[k].type, p.strings);
      os << ")\n";
    }
  }
}

nlohmann::json annotation_json(const Problem& p) {
  nlohmann::json out;
  int n = p.options.bound.value_or(p.options.max_bound.value_or(2));
  TupleEnv env = build_symbolic_db(p.schema, n).tuples;
  int id = 1;
  out["bound"] = n;
  out["q1"] = annotate(p.schema, env, *p.q1, id).to_json();
  out["q2"] = annotate(p.schema, env, *p.q2, id).to_json();
  return out;
}

VerifyOptions options_for(const Problem& p, const Flags& f, const std::string& name) {
  VerifyOptions o;
  o.timeout_ms = f.timeout_ms.value_or(p.options.timeout_ms);
  o.dump_dir = f.dump_dir;
  o.dump_name = name;
  return o;
}

Problem load(const fs::path& path, const Flags& f) {
  Problem p = parse_problem(read_file(path));
  if (f.bound) {
    p.options.bound = f.bound;
    p.options.max_bound.reset();
  } else if (f.max_bound) {
    p.options.max_bound = f.max_bound;
    p.options.bound.reset();
  }
  return p;
}

nlohmann::json error_json(const std::string& status, const std::string& reason) {
  return {{"status", status}, {"reason", reason}};
}

int run_one(const Flags& f) {
  Problem p;
  try {
    p = load(f.problem, f);
  } catch (const Error& e) {
    if (f.format == "json") std::cout << error_json("unsupported", e.what()).dump() << "\n";
    else std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (f.annotations) std::cerr << annotation_json(p).dump(2) << "\n";
  try {
    VerificationResult r = verify_problem(p, options_for(p, f, fs::path(f.problem).stem().string()));
    if (f.format == "json") std::cout << r.to_json(p.schema, &p.strings).dump() << "\n";
    else print_text(std::cout, r, p);
    return r.exit_code();
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    if (f.format == "json") std::cout << error_json("unknown", std::string("internal error: ") + e.what()).dump() << "\n";
    return 3;
  }
}

int run_corpus(const Flags& f) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(f.corpus))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    nlohmann::json line;
    try {
      Problem p = load(path, f);
      line = verify_problem(p, options_for(p, f, path.stem().string())).to_json(p.schema, &p.strings);
    } catch (const InternalError& e) {
      line = error_json("unknown", std::string("internal error: ") + e.what());
    } catch (const Error& e) {
      line = error_json("unsupported", e.what());
    }
    line["problem"] = path.filename().string();
    std::cout << line.dump() << std::endl;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded equivalence checking for SQL queries"};
  app.require_subcommand(1);
  Flags f;
  auto* verify = app.add_subcommand("verify", "Check two queries for equivalence up to a row bound");
  auto* problem = verify->add_option("--problem", f.problem, "Problem file (JSON)")->check(CLI::ExistingFile);
  auto* corpus = verify->add_option("--corpus", f.corpus, "Directory of problem files, one JSON line each")
                     ->check(CLI::ExistingDirectory);
  problem->excludes(corpus);
  auto* bound = verify->add_option("--bound", f.bound, "Verify at exactly this bound")->check(CLI::PositiveNumber);
  verify->add_option("--max-bound", f.max_bound, "Increase the bound from 1 up to this value")
      ->check(CLI::PositiveNumber)
      ->excludes(bound);
  verify->add_option("--timeout-ms", f.timeout_ms, "Total time budget")->check(CLI::NonNegativeNumber);
  verify->add_option("--dump-smt2", f.dump_dir, "Write every solver script into this directory");
  verify->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  verify->add_flag("--dump-annotations", f.annotations, "Print inferred attributes and tuples to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (f.problem.empty() == f.corpus.empty()) {
    std::cerr << "verify needs exactly one of --problem or --corpus\n";
    return 2;
  }
  return f.corpus.empty() ? run_one(f) : run_corpus(f);
}
