#include "golden.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "svir/cli.hpp"

namespace svir::golden {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

fs::path default_dir() { return SVIR_GOLDEN_DIR; }

std::vector<Case> load_cases(const fs::path& dir) {
  std::vector<Case> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".args") continue;
    Case c;
    c.name = e.path().stem().string();
    for (auto& l : lines(slurp(e.path()))) {
      if (!l.empty()) c.args.push_back(l);
    }
    c.expected = fs::path(e.path()).replace_extension(".out");
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Case& a, const Case& b) { return a.name < b.name; });
  return out;
}

std::string normalize(const std::string& text) {
  static const std::regex timing(R"("elapsed_ms": [0-9]+)");
  return std::regex_replace(text, timing, R"("elapsed_ms": 0)");
}

std::string transcript(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  std::string t = out.str();
  if (!err.str().empty()) t += "--- stderr\n" + err.str();
  t += "--- exit " + std::to_string(code) + "\n";
  return normalize(t);
}

Outcome check(const Case& c, bool regenerate) {
  Outcome o{c.name, false, {}};
  const std::string got = transcript(c.args);
  if (regenerate) {
    std::ofstream(c.expected, std::ios::binary) << got;
    o.ok = true;
    o.detail = "regenerated";
    return o;
  }
  if (!fs::exists(c.expected)) {
    o.detail = "missing " + c.expected.filename().string();
    return o;
  }
  const std::string want = normalize(slurp(c.expected));
  if (got == want) {
    o.ok = true;
    return o;
  }
  const auto g = lines(got), w = lines(want);
  for (std::size_t i = 0; i < std::max(g.size(), w.size()); ++i) {
    const std::string gl = i < g.size() ? g[i] : "<eof>";
    const std::string wl = i < w.size() ? w[i] : "<eof>";
    if (gl != wl) {
      o.detail = "line " + std::to_string(i + 1) + ": expected '" + wl + "', got '" + gl + "'";
      return o;
    }
  }
  o.detail = "trailing bytes differ";
  return o;
}

std::vector<Outcome> check_all(const fs::path& dir) {
  const char* env = std::getenv("SVIR_REGEN_GOLDEN");
  const bool regen = env != nullptr && std::string(env) == "1";
  std::vector<Outcome> out;
  for (const auto& c : load_cases(dir)) out.push_back(check(c, regen));
  return out;
}

}  // namespace svir::golden
