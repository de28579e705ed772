// Acceptance checks 1-9; prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "slp/ap_match.hpp"
#include "slp/doubling.hpp"
#include "slp/grammar_io.hpp"
#include "slp/interval_queries.hpp"
#include "slp/lce.hpp"
#include "slp/oracle.hpp"
#include "slp/regularities.hpp"
#include "support.hpp"

using namespace slp;

namespace {

const std::string kExample = std::string(SLP_TEST_DATA) + "/example.slp";

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

std::string cli_out(std::vector<std::string> args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = cli::run_cli(std::move(args), out, err);
  if (code) *code = c;
  return out.str() + (c == 0 ? "" : "[exit " + std::to_string(c) + "] " + err.str());
}

struct Entry {
  Text text;
  Slp grammar;
  std::string builder;
};

// 500 strings of length 1-300 over 1-3 letters, plus 1000/2000-length ones,
// each compressed by both builders.
std::vector<Entry> corpus() {
  std::mt19937_64 rng(20240601);
  std::vector<Text> texts;
  for (int r = 0; r < 500; ++r) {
    const std::size_t n = 1 + rng() % 300;
    const int sigma = 1 + r % 3;
    texts.push_back(r % 2 ? test::periodic_text(rng, n, sigma) : test::random_text(rng, n, sigma));
  }
  for (int r = 0; r < 10; ++r) {
    const std::size_t n = r < 5 ? 1000 : 2000;
    const int sigma = 1 + r % 3;
    texts.push_back(r % 2 ? test::periodic_text(rng, n, sigma) : test::random_text(rng, n, sigma));
  }
  std::vector<Entry> out;
  for (const Text& t : texts) {
    out.push_back({t, build_balanced_slp(t), "balanced"});
    out.push_back({t, build_random_slp(t, rng()), "skewed"});
  }
  return out;
}

std::string show(const Text& t) {
  const std::string s = test::to_string(t);
  return s.size() > 40 ? s.substr(0, 40) + "..." : s;
}

void criterion_example() {
  const Text s = oracle::decompress(cli::load_slp(kExample));
  std::string want_runs;
  for (const slp::Run& r : oracle::naive_runs(s))
    want_runs += std::to_string(r.b) + " " + std::to_string(r.e) + " " + std::to_string(r.c) + "\n";
  std::string want_pals;
  for (const GappedPal& p : oracle::naive_gpals(s, 0)) want_pals += std::to_string(p.b) + " " + std::to_string(p.e) + "\n";
  require(oracle::naive_runs(s).size() == 8, "oracle does not give 8 runs");
  require(cli_out({"runs", kExample, "--expand"}) == want_runs, "runs --expand differs from the 8 oracle runs");
  require(cli_out({"count", kExample, "--what", "squares", "--range", "1:14"}) == "13\n", "square count is not 13");
  require(oracle::naive_gpals(s, 0).size() == 6, "oracle does not give 6 palindromes");
  require(cli_out({"gpals", kExample, "--gap", "0", "--expand"}) == want_pals, "gpals --gap 0 differs from oracle");
}

void criterion_runs(const std::vector<Entry>& entries) {
  for (const Entry& e : entries) {
    const auto got = expand_runs(all_runs(e.grammar));
    require(got == oracle::naive_runs(e.text), "runs differ on " + e.builder + " " + show(e.text));
  }
}

void criterion_gpals(const std::vector<Entry>& entries) {
  for (const Entry& e : entries)
    for (Pos g : {0, 1, 2, 5})
      require(expand_gpals(all_gpals(e.grammar, g)) == oracle::naive_gpals(e.text, g),
              "gapped palindromes differ (g=" + std::to_string(g) + ") on " + e.builder + " " + show(e.text));
}

void criterion_lce(const std::vector<Entry>& entries) {
  std::mt19937_64 rng(4);
  for (const Entry& e : entries) {
    const Pos n = e.text.size();
    if (n > 5000) continue;
    LceEngine lce(e.grammar);
    for (int q = 0; q < 10000; ++q) {
      const LceMode mode = static_cast<LceMode>(q % 4);
      const Pos k1 = 1 + rng() % n, k2 = 1 + rng() % n;
      require(lce.lce_dir(mode, k1, k2) == oracle::naive_lce(e.text, mode, k1, k2),
              "lce mismatch on " + show(e.text) + " at " + std::to_string(k1) + "," + std::to_string(k2));
    }
  }
}

// crossing occurrences of y in val(X_x): candidate starts in a window of 2|y|-2
// symbols around the split, matched by a direct scan
std::set<Pos> brute_entry(const Text& tx, Pos split, const Text& ty) {
  std::set<Pos> out;
  const Pos m = ty.size();
  if (m < 2 || m > tx.size()) return out;
  const Pos lo = split + 2 > m ? split + 2 - m : 1;
  for (Pos u = lo; u <= split && u + m - 1 <= tx.size(); ++u)
    if (u + m - 1 > split && std::equal(ty.begin(), ty.end(), tx.begin() + (u - 1))) out.insert(u);
  return out;
}

void criterion_ap_table() {
  std::mt19937_64 rng(55);
  for (std::size_t n : {40, 300, 800, 2000}) {
    for (int rep = 0; rep < 2; ++rep) {
      const Text t = rep ? test::periodic_text(rng, n, 2) : test::random_text(rng, n, 2);
      const Slp g = rep ? build_random_slp(t, rng()) : build_balanced_slp(t);
      std::vector<Text> val(g.size() + 1);
      for (Var v = 1; v <= g.size(); ++v) val[v] = expand(g, v);
      ApTable table = compute_ap_table(g, g);
      for (Var x = 1; x <= g.size(); ++x) {
        const Production& p = g.rule(x);
        const Pos split = p.is_terminal() ? 0 : g.length(p.left());
        for (Var y = 1; y <= g.size(); ++y) {
          const ArithProg ap = table.entry(x, y);
          std::set<Pos> got;
          for (Pos j = 0; j < ap.count; ++j) got.insert(ap.term(j));
          require(got == (p.is_terminal() ? std::set<Pos>{} : brute_entry(val[x], split, val[y])),
                  "Occ entry (" + std::to_string(x) + "," + std::to_string(y) + ") wrong, N=" + std::to_string(n));
        }
      }
      // local search windows
      const Ratio alphas[] = {{1, 2}, {1, 1}, {2, 1}, {3, 1}};
      for (int q = 0; q < 400; ++q) {
        const Var x = 1 + rng() % g.size(), y = 1 + rng() % g.size();
        const Pos m = g.length(y), len = g.length(x);
        if (m > len) continue;
        const Pos b = 1 + rng() % (len - m + 1);
        const Ratio a = alphas[q % 4];
        const auto aps = local_search(table, x, y, b, a);
        const Pos reach = Pos((static_cast<unsigned __int128>(a.num) * m) / a.den);
        const Pos e = std::min(b + reach, len - m + 1);
        std::vector<Pos> want;
        for (Pos u : oracle::naive_occ(val[x], val[y]))
          if (u >= b && u <= e) want.push_back(u);
        require(aps.size() <= (a.num + a.den - 1) / a.den + 1, "local_search returned too many progressions");
        require(cli::positions(aps) == want, "local_search union wrong");
      }
    }
  }
}

void criterion_doubling() {
  std::mt19937_64 rng(66);
  for (int r = 0; r < 200; ++r) {
    const std::size_t n = 1 + rng() % (r < 150 ? 600 : 10000);
    const Text t = r % 2 ? test::periodic_text(rng, n, 1 + r % 3) : test::random_text(rng, n, 1 + r % 3);
    const Slp g = r % 3 ? build_random_slp(t, rng()) : build_balanced_slp(t);
    const Pos lg = ceil_log2(n);
    for (Side side : {Side::Prefix, Side::Suffix}) {
      const DoublingChain c = doubling_chain(g, side);
      const std::string where = std::string(side == Side::Prefix ? "prefix" : "suffix") + " chain, N=" + std::to_string(n);
      require(c.lengths.front() == 1 && c.lengths.back() == n, where + ": endpoints");
      for (std::size_t k = 1; k < c.lengths.size(); ++k)
        require(c.lengths[k - 1] < c.lengths[k] && c.lengths[k] <= 2 * c.lengths[k - 1], where + ": ratio");
      require(c.vars.size() <= 2 * lg + 2, where + ": chain too long");
      require(c.grammar.size() <= kChainSizeRules * g.size() + kChainSizeLog * lg, where + ": size bound");
      require(c.grammar.height(c.grammar.root()) <= kChainHeightBase * g.height(g.root()) + kChainHeightLog * lg,
              where + ": height bound");
      require(expand(c.grammar) == t, where + ": grammar no longer derives s");
      for (std::size_t k = 0; k < c.vars.size(); ++k) {
        const Text v = expand(c.grammar, c.vars[k]);
        const bool ok = side == Side::Prefix ? std::equal(v.begin(), v.end(), t.begin())
                                             : std::equal(v.begin(), v.end(), t.end() - v.size());
        require(ok, where + ": element is not a prefix/suffix");
      }
    }
  }
}

void criterion_fibonacci() {
  for (Var k = 2; k <= 31; ++k) {
    const Slp g = fibonacci_slp(k);
    const Pos want = oracle::lyndon_runs(expand(g)).size();
    require(expand_runs(all_runs(g), 2 * want + 16).size() == want, "run count differs at k=" + std::to_string(k));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Slp big = fibonacci_slp(60);
  const CompactRuns cr = all_runs(big);
  const Pos squares = count_square_occurrences(cr);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(secs < 60, "k=60 took " + std::to_string(secs) + " s");
  require(squares > 0, "no squares at k=60");
  require(cr.total() <= kQuintupletFactor * big.size() * ceil_log2(big.length()), "quintuplet bound exceeded at k=60");
}

void criterion_intervals() {
  std::mt19937_64 rng(88);
  std::vector<std::pair<Text, Slp>> inputs;
  for (int r = 0; r < 100; ++r) {
    const std::size_t n = 1 + rng() % 200;
    Text t = r % 2 ? test::periodic_text(rng, n, 1 + r % 3) : test::random_text(rng, n, 1 + r % 3);
    Slp g = r % 2 ? build_random_slp(t, rng()) : build_balanced_slp(t);
    inputs.push_back({std::move(t), std::move(g)});
  }
  const Pos gaps[] = {0, 1, 2, 5};
  std::vector<CompactRuns> runs;
  std::vector<std::vector<CompactGPals>> pals;
  const Pos before = symbols_read.load();
  for (const auto& in : inputs) {
    runs.push_back(all_runs(in.second));
    pals.emplace_back();
    for (Pos g : gaps) pals.back().push_back(all_gpals(in.second, g));
  }
  struct Query {
    std::size_t input, gap_index;
    Interval iv;
    Pos runs, squares, pals;
  };
  std::vector<Query> queries;
  for (int q = 0; q < 2000; ++q) {
    const std::size_t i = rng() % inputs.size();
    const Pos n = inputs[i].first.size();
    Pos b = 1 + rng() % n, e = 1 + rng() % n;
    if (b > e) std::swap(b, e);
    Query query{i, std::size_t(q % 4), {b, e}, 0, 0, 0};
    const Slp& g = inputs[i].second;
    const auto report = count_runs_and_squares_in(g, runs[i], query.iv);
    require(report.runs->total() == report.runs->inside + report.runs->spanning + report.runs->truncated,
            "breakdown does not add up");
    query.runs = count_runs_in(g, runs[i], query.iv);
    query.squares = count_squares_in(g, runs[i], query.iv);
    query.pals = count_gpals_in(g, pals[i][query.gap_index], query.iv);
    queries.push_back(query);
  }
  require(symbols_read.load() == before, "compressed-side counting materialized text symbols");
  for (const Query& q : queries) {
    const Text& t = inputs[q.input].first;
    const Text sub(t.begin() + (q.iv.b - 1), t.begin() + q.iv.e);
    const std::string where = show(t) + " [" + std::to_string(q.iv.b) + "," + std::to_string(q.iv.e) + "]";
    require(q.runs == oracle::naive_runs(sub).size(), "run count differs on " + where);
    require(q.squares == oracle::naive_square_count(sub), "square count differs on " + where);
    require(q.pals == oracle::naive_gpals(sub, gaps[q.gap_index]).size(), "palindrome count differs on " + where);
  }
}

void criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "slptool_acceptance";
  fs::create_directories(dir);
  std::mt19937_64 rng(99);
  const Text t = test::periodic_text(rng, 3000, 2);
  const std::string text_file = (dir / "text.txt").string(), pattern_file = (dir / "pattern.txt").string();
  std::ofstream(text_file, std::ios::binary) << test::to_string(t);
  std::ofstream(pattern_file, std::ios::binary) << test::to_string(Text(t.begin() + 100, t.begin() + 106));
  const std::string fib = (dir / "fib.slp").string();
  std::ofstream(fib) << serialize(fibonacci_slp(22));

  // compress: same bytes every time
  std::string first_slp;
  for (int rep = 0; rep < 2; ++rep) {
    const std::string out = (dir / ("c" + std::to_string(rep) + ".slp")).string();
    int code = 0;
    cli_out({"compress", text_file, "--out", out, "--builder", "random", "--seed", "7"}, &code);
    require(code == 0, "compress failed");
    const std::string bytes = cli::read_file(out);
    if (rep == 0) first_slp = bytes;
    require(bytes == first_slp, "compress output differs between runs");
  }
  const std::string slp_file = (dir / "c0.slp").string();

  using Args = std::vector<std::string>;
  const std::vector<std::pair<Args, bool>> commands{
      {{"decompress", slp_file}, false},
      {{"decompress", fib, "--range", "5:900"}, false},
      {{"stats", slp_file}, false},
      {{"runs", slp_file, "--expand"}, true},
      {{"runs", fib, "--quintuplets"}, true},
      {{"gpals", slp_file, "--gap", "1"}, true},
      {{"gpals", fib, "--gap", "3", "--groups"}, true},
      {{"lce", slp_file, "--mode", "rl", "1500", "700"}, false},
      {{"occ", slp_file, "--pattern-file", pattern_file}, false},
      {{"occ", slp_file, "--pattern-file", pattern_file, "--from", "50", "--alpha", "3"}, false},
      {{"count", slp_file, "--what", "runs", "--range", "10:2500"}, true},
      {{"count", slp_file, "--what", "squares", "--range", "10:2500"}, true},
      {{"count", fib, "--what", "gpals", "--gap", "2", "--range", "3:17000"}, true},
      {{"verify", slp_file, "--what", "runs"}, true},
      {{"verify", slp_file, "--what", "gpals", "--gap", "2"}, true},
      {{"verify", slp_file, "--what", "lce", "--seed", "5", "--queries", "2000"}, false},
      {{"verify", slp_file, "--what", "occ", "--seed", "5", "--queries", "50"}, false},
  };
  for (const auto& [args, threaded] : commands) {
    int code = 0;
    const std::string first = cli_out(args, &code);
    require(code == 0, args[0] + " failed: " + first);
    require(cli_out(args) == first, args[0] + " output differs between runs");
    if (!threaded) continue;
    for (const char* n : {"2", "4"}) {
      Args more = args;
      more.insert(more.end(), {"--threads", n});
      require(cli_out(more) == first, args[0] + " output differs with --threads " + n);
    }
  }
}

}  // namespace

int main() {
  const auto entries = corpus();
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"worked example golden (runs, squares, 0-gapped palindromes)", criterion_example},
      {"runs oracle equivalence (1020 grammars)", [&] { criterion_runs(entries); }},
      {"gapped-palindrome oracle equivalence, g in {0,1,2,5}", [&] { criterion_gpals(entries); }},
      {"LCE oracle equivalence (10^4 queries per string)", [&] { criterion_lce(entries); }},
      {"AP-table entries and local search", criterion_ap_table},
      {"approximately doubling chains", criterion_doubling},
      {"Fibonacci smoke test (k <= 31 counts, k = 60 compact)", criterion_fibonacci},
      {"interval counting (2000 intervals)", criterion_intervals},
      {"CLI determinism (repeats and thread counts)", criterion_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string status = "PASS", detail;
    try {
      criteria[i].second();
    } catch (const Failure& f) {
      status = "FAIL";
      detail = f.why;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (status == "FAIL") ++failed;
    std::printf("criterion %zu: %s  %s (%.2f s)%s%s\n", i + 1, status.c_str(), criteria[i].first.c_str(), secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
