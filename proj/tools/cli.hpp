#pragma once

// Command-line front end. run_cli returns the process exit code:
// 0 success, 1 domain error or failed verification, 2 I/O, format or usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slp/ap_match.hpp"
#include "slp/core.hpp"
#include "slp/grammar_io.hpp"
#include "slp/interval_queries.hpp"
#include "slp/lce.hpp"
#include "slp/oracle.hpp"
#include "slp/regularities.hpp"

namespace slp::cli {

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("cannot read " + path);
  return bytes;
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(bytes.data(), std::streamsize(bytes.size()))) throw IoFailure("cannot write " + path);
}

inline Slp load_slp(const std::string& path) { return parse_slp(read_file(path)); }

inline Pos parse_pos(const std::string& s, const std::string& what) {
  if (s.empty() || s.size() > 19 || s.find_first_not_of("0123456789") != std::string::npos)
    throw domain_error("bad " + what + " '" + s + "'");
  return std::stoull(s);
}

/// "b:e", 1-based inclusive.
inline Interval parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw domain_error("range must look like b:e, got '" + s + "'");
  return {parse_pos(s.substr(0, colon), "range start"), parse_pos(s.substr(colon + 1), "range end")};
}

/// "3", "1/2" or "0.5".
inline Ratio parse_ratio(const std::string& s) {
  if (const auto slash = s.find('/'); slash != std::string::npos)
    return {parse_pos(s.substr(0, slash), "alpha"), parse_pos(s.substr(slash + 1), "alpha")};
  const auto dot = s.find('.');
  if (dot == std::string::npos) return {parse_pos(s, "alpha"), 1};
  const std::string frac = s.substr(dot + 1);
  if (frac.size() > 9) throw domain_error("alpha has too many decimals");
  std::uint64_t den = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
  const std::string whole = s.substr(0, dot);
  return {(whole.empty() ? 0 : parse_pos(whole, "alpha")) * den + (frac.empty() ? 0 : parse_pos(frac, "alpha")), den};
}

inline LceMode parse_mode(const std::string& s) {
  if (s == "rr") return LceMode::RR;
  if (s == "ll") return LceMode::LL;
  if (s == "lr") return LceMode::LR;
  if (s == "rl") return LceMode::RL;
  throw domain_error("mode must be rr, ll, lr or rl");
}

// Quintuplets (groups) shifted to positions of s, one per designated node.
template <typename Lists, typename Shift>
auto global_lists(const Slp& wrapped, const Lists& lists, Pos limit, Shift shift) {
  std::vector<typename Lists::value_type::value_type> out;
  detail::for_each_reporting_node(wrapped, lists, [&](Var v, Pos off) {
    for (const auto& q : lists[v]) {
      if (out.size() >= limit) throw domain_error("output exceeds limit " + std::to_string(limit));
      out.push_back(shift(q, off - 1));
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Every occurrence of `pattern` (root of its own grammar) in s as progressions.
inline std::vector<ArithProg> all_occurrences(const Slp& text, const Slp& pattern, Pos limit) {
  const Pos n = text.length(), m = pattern.length();
  if (m > n) return {};
  if ((n - m) / m + 1 > limit) throw domain_error("search needs more than " + std::to_string(limit) + " windows");
  ApTable table(text, pattern);
  if (n == m) return {table.occurrences(text.root(), pattern.root(), 1, 1)};
  return local_search(table, text.root(), pattern.root(), 1, Ratio{n - m, m});
}

/// Joins neighbouring progressions that continue each other with one step.
inline std::vector<ArithProg> merge_progressions(const std::vector<ArithProg>& aps) {
  std::vector<ArithProg> out;
  for (const ArithProg& raw : aps) {
    const ArithProg ap = raw.normalized();
    if (ap.empty()) continue;
    if (!out.empty()) {
      ArithProg& cur = out.back();
      const Pos d = ap.first - cur.last();
      if ((cur.count == 1 || cur.diff == d) && (ap.count == 1 || ap.diff == d)) {
        cur.diff = d;
        cur.count += ap.count;
        continue;
      }
    }
    out.push_back(ap);
  }
  return out;
}

inline std::vector<Pos> positions(const std::vector<ArithProg>& aps) {
  std::vector<Pos> out;
  for (const ArithProg& ap : aps)
    for (Pos j = 0; j < ap.count; ++j) out.push_back(ap.term(j));
  return out;
}

inline std::string describe(const slp::Run& r) {
  return "<" + std::to_string(r.b) + "," + std::to_string(r.e) + "," + std::to_string(r.c) + ">";
}
inline std::string describe(const GappedPal& r) {
  return "<" + std::to_string(r.b) + "," + std::to_string(r.e) + ">";
}

// "OK" or the first index where two sorted lists differ.
template <typename T>
bool compare_lists(const std::vector<T>& got, const std::vector<T>& want, const std::string& what,
                   std::ostream& out) {
  const std::size_t n = std::min(got.size(), want.size());
  for (std::size_t k = 0; k < n; ++k)
    if (!(got[k] == want[k])) {
      out << "MISMATCH " << what << " #" << k + 1 << ": got " << describe(got[k]) << " expected "
          << describe(want[k]) << "\n";
      return false;
    }
  if (got.size() != want.size()) {
    out << "MISMATCH " << what << " count: got " << got.size() << " expected " << want.size() << "\n";
    return false;
  }
  return true;
}

// Oracle runs: the quadratic scan for short texts, Lyndon roots beyond.
inline std::vector<slp::Run> oracle_runs(const Text& t) {
  return t.size() <= 5000 ? oracle::naive_runs(t) : oracle::lyndon_runs(t);
}

struct Options {
  std::string input, out_path, builder = "balanced", range, mode, pattern_file, alpha = "1", what;
  bool expand = false, compact = false;
  Pos gap = 0, k1 = 0, k2 = 0, from = 0, limit = kDefaultExpansionLimit, queries = 0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline int verify(const Options& o, std::ostream& out) {
  const Slp g = load_slp(o.input);
  const Pos n = g.length();
  if (n > o.limit)
    throw domain_error("text length " + std::to_string(n) + " exceeds --limit " + std::to_string(o.limit));
  const Text t = oracle::decompress(g);
  std::mt19937_64 rng(o.seed);
  bool ok = true;
  if (o.what == "runs") {
    ok = compare_lists(expand_runs(all_runs(g, o.threads), o.limit), oracle_runs(t), "run", out);
  } else if (o.what == "gpals") {
    ok = compare_lists(expand_gpals(all_gpals(g, o.gap, o.threads), o.limit), oracle::naive_gpals(t, o.gap),
                       "gapped palindrome", out);
  } else if (o.what == "lce") {
    LceEngine lce(g);
    const Pos queries = o.queries ? o.queries : 10000;
    for (Pos q = 0; q < queries && ok; ++q) {
      const LceMode mode = static_cast<LceMode>(rng() % 4);
      const Pos k1 = 1 + rng() % n, k2 = 1 + rng() % n;
      const Pos got = lce.lce_dir(mode, k1, k2), want = oracle::naive_lce(t, mode, k1, k2);
      if (got != want) {
        out << "MISMATCH lce mode " << int(mode) << " (" << k1 << "," << k2 << "): got " << got << " expected " << want
            << "\n";
        ok = false;
      }
    }
  } else if (o.what == "occ") {
    const Pos queries = o.queries ? o.queries : 200;
    for (Pos q = 0; q < queries && ok; ++q) {
      // substrings of s, and random strings over its alphabet
      const Pos m = 1 + rng() % std::min<Pos>(n, 16);
      Text p;
      if (q % 2 == 0) {
        const Pos at = rng() % (n - m + 1);
        p.assign(t.begin() + at, t.begin() + at + m);
      } else {
        for (Pos k = 0; k < m; ++k) p.push_back(t[rng() % n]);
      }
      const auto got = positions(all_occurrences(g, build_balanced_slp(p), o.limit));
      const auto want = oracle::naive_occ(t, p);
      if (got != want) {
        out << "MISMATCH occ pattern #" << q + 1 << " (length " << m << "): got " << got.size()
            << " occurrences expected " << want.size() << "\n";
        ok = false;
      }
    }
  } else {
    throw domain_error("--what must be runs, gpals, lce or occ");
  }
  if (ok) out << "OK\n";
  return ok ? 0 : 1;
}

inline int dispatch(const std::string& cmd, const Options& o, std::ostream& out) {
  if (cmd == "compress") {
    const Text t = to_text(read_file(o.input));
    Slp g = o.builder == "balanced" ? build_balanced_slp(t)
            : o.builder == "random" ? build_random_slp(t, o.seed)
                                    : throw domain_error("--builder must be balanced or random");
    write_file(o.out_path, serialize(g));
    return 0;
  }
  const Slp g = load_slp(o.input);
  const Pos n = g.length();
  const Interval whole{1, n};
  if (cmd == "decompress") {
    const Interval iv = o.range.empty() ? whole : parse_range(o.range);
    check_interval(g, g.root(), iv);
    if (iv.length() > o.limit) throw domain_error("range longer than --limit " + std::to_string(o.limit));
    std::string bytes;
    for (Symbol c : expand(g, g.root(), iv)) {
      if (c > 255) throw domain_error("symbol " + std::to_string(c) + " is not a byte");
      bytes.push_back(static_cast<char>(c));
    }
    out << bytes;
  } else if (cmd == "stats") {
    out << "n=" << g.size() << " N=" << n << " h=" << g.height(g.root()) << "\n";
  } else if (cmd == "runs") {
    const CompactRuns cr = all_runs(g, o.threads);
    if (o.compact) {
      for (const RunQuintuplet& q : global_lists(cr.grammar, cr.per_variable, o.limit, [](RunQuintuplet q, Pos s) {
             q.d1 += s;
             q.d2 += s;
             return q;
           }))
        out << q.d1 << ' ' << q.d2 << ' ' << q.d3 << ' ' << q.c << ' ' << q.k << '\n';
    } else {
      for (const slp::Run& r : expand_runs(cr, o.limit)) out << r.b << ' ' << r.e << ' ' << r.c << '\n';
    }
  } else if (cmd == "gpals") {
    const CompactGPals cg = all_gpals(g, o.gap, o.threads);
    if (o.compact) {
      for (const GPalGroup& q : global_lists(cg.grammar, cg.per_variable, o.limit, [](GPalGroup q, Pos s) {
             q.b0 += s;
             q.e0 += s;
             return q;
           }))
        out << q.b0 << ' ' << q.e0 << ' ' << q.db << ' ' << q.de << ' ' << q.k << '\n';
    } else {
      for (const GappedPal& r : expand_gpals(cg, o.limit)) out << r.b << ' ' << r.e << '\n';
    }
  } else if (cmd == "lce") {
    LceEngine lce(g);
    out << lce.lce_dir(parse_mode(o.mode), o.k1, o.k2) << "\n";
  } else if (cmd == "occ") {
    const Text p = to_text(read_file(o.pattern_file));
    if (p.empty()) throw domain_error("empty pattern");
    const Slp pattern = build_balanced_slp(p);
    std::vector<ArithProg> aps;
    if (o.from) {
      ApTable table(g, pattern);
      aps = local_search(table, g.root(), pattern.root(), o.from, parse_ratio(o.alpha));
    } else {
      aps = all_occurrences(g, pattern, o.limit);
    }
    for (const ArithProg& a : merge_progressions(aps)) out << a.first << ' ' << a.diff << ' ' << a.count << '\n';
  } else if (cmd == "count") {
    const Interval iv = o.range.empty() ? whole : parse_range(o.range);
    if (o.what == "runs") {
      out << count_runs_in(g, all_runs(g, o.threads), iv) << "\n";
    } else if (o.what == "squares") {
      out << count_squares_in(g, all_runs(g, o.threads), iv) << "\n";
    } else if (o.what == "gpals") {
      out << count_gpals_in(g, all_gpals(g, o.gap, o.threads), iv) << "\n";
    } else {
      throw domain_error("--what must be runs, squares or gpals");
    }
  } else if (cmd == "verify") {
    return verify(o, out);
  }
  return 0;
}

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Runs, squares, gapped palindromes and LCE on straight-line programs"};
  app.require_subcommand(1, 1);
  Options o;
  auto input = [&](CLI::App* sub, const char* what) { sub->add_option("file", o.input, what)->required(); };
  auto threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "worker threads for per-variable detection")
        ->check(CLI::Range(1u, 256u));
  };

  auto* compress = app.add_subcommand("compress", "build an SLP for a text file");
  input(compress, "text file");
  compress->add_option("--out", o.out_path, "SLP file to write")->required();
  compress->add_option("--builder", o.builder, "balanced or random");
  compress->add_option("--seed", o.seed, "seed for the random builder");

  auto* decompress = app.add_subcommand("decompress", "write the derived text (or a range) as bytes");
  input(decompress, "SLP file");
  decompress->add_option("--range", o.range, "b:e");
  decompress->add_option("--limit", o.limit, "refuse ranges longer than this");

  auto* stats = app.add_subcommand("stats", "print size, length and height");
  input(stats, "SLP file");

  auto* runs = app.add_subcommand("runs", "all runs as 'b e c' or quintuplets 'd1 d2 d3 c k'");
  input(runs, "SLP file");
  auto* runs_expand = runs->add_flag("--expand", o.expand, "one line per run (default)");
  runs->add_flag("--quintuplets", o.compact, "one line per quintuplet")->excludes(runs_expand);
  runs->add_option("--limit", o.limit, "maximum number of output lines");
  threads(runs);

  auto* gpals = app.add_subcommand("gpals", "maximal gapped palindromes as 'b e' or groups 'b0 e0 db de k'");
  input(gpals, "SLP file");
  gpals->add_option("--gap", o.gap, "gap length")->required();
  auto* gpals_expand = gpals->add_flag("--expand", o.expand, "one line per palindrome (default)");
  gpals->add_flag("--groups", o.compact, "one line per group")->excludes(gpals_expand);
  gpals->add_option("--limit", o.limit, "maximum number of output lines");
  threads(gpals);

  auto* lce = app.add_subcommand("lce", "longest common extension");
  input(lce, "SLP file");
  lce->add_option("--mode", o.mode, "rr, ll, lr or rl")->required();
  lce->add_option("k1", o.k1, "first position")->required();
  lce->add_option("k2", o.k2, "second position")->required();

  auto* occ = app.add_subcommand("occ", "occurrences of a pattern as 'first diff count' progressions");
  input(occ, "SLP file");
  occ->add_option("--pattern-file", o.pattern_file, "pattern text file")->required();
  auto* from = occ->add_option("--from", o.from, "start of a local search window");
  occ->add_option("--alpha", o.alpha, "window length in pattern lengths (3, 1/2, 0.5)")->needs(from);
  occ->add_option("--limit", o.limit, "maximum number of search windows");

  auto* count = app.add_subcommand("count", "count regularities inside a range");
  input(count, "SLP file");
  count->add_option("--what", o.what, "runs, squares or gpals")->required();
  count->add_option("--gap", o.gap, "gap length for gpals");
  count->add_option("--range", o.range, "b:e (default: whole text)");
  threads(count);

  auto* verify_cmd = app.add_subcommand("verify", "compare against the brute-force oracle");
  input(verify_cmd, "SLP file");
  verify_cmd->add_option("--what", o.what, "runs, gpals, lce or occ")->required();
  verify_cmd->add_option("--gap", o.gap, "gap length for gpals");
  verify_cmd->add_option("--limit", o.limit, "refuse texts longer than this");
  verify_cmd->add_option("--seed", o.seed, "seed for random queries");
  verify_cmd->add_option("--queries", o.queries, "number of random queries (lce, occ)");
  threads(verify_cmd);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    return dispatch(app.get_subcommands().front()->get_name(), o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Domain ? 1 : 2;
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 1;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace slp::cli
