#include "pearlforge/pc_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace pf {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<long long> read_ints(std::istringstream& is, int count, int lineno) {
  std::vector<long long> v;
  long long x;
  while (is >> x) v.push_back(x);
  if (!is.eof()) throw ParseError("line " + std::to_string(lineno) + ": expected integers");
  if (count >= 0 && static_cast<int>(v.size()) != count)
    throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(count) +
                     " integers, got " + std::to_string(v.size()));
  return v;
}

Elem to_elem(const std::vector<long long>& v, int p, int lineno) {
  Elem e{};
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0 || v[i] >= p)
      throw ParseError("line " + std::to_string(lineno) + ": exponent " + std::to_string(v[i]) +
                       " outside [0,p)");
    e[i] = static_cast<uint8_t>(v[i]);
  }
  return e;
}

}  // namespace

PcPresentation parse_presentation(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int p = -1, n = -1;
  std::vector<int> weights;
  std::vector<Elem> powers;
  std::vector<std::tuple<int, int, Elem>> comms;
  enum { kHeader, kPowers, kComms, kDone } state = kHeader;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (state == kDone) throw ParseError("line " + std::to_string(lineno) + ": content after 'end'");
    if (state == kPowers && static_cast<int>(powers.size()) < n) {
      powers.push_back(to_elem(read_ints(ls, n, lineno), p, lineno));
      continue;
    }
    std::string key;
    ls >> key;
    if (key == "p" && state == kHeader) {
      auto v = read_ints(ls, 1, lineno);
      p = static_cast<int>(v[0]);
    } else if (key == "n" && state == kHeader) {
      auto v = read_ints(ls, 1, lineno);
      n = static_cast<int>(v[0]);
    } else if (key == "weights" && state == kHeader) {
      if (n < 0) throw ParseError("line " + std::to_string(lineno) + ": 'weights' before 'n'");
      for (long long w : read_ints(ls, n, lineno)) weights.push_back(static_cast<int>(w));
    } else if (key == "powers" && state == kHeader) {
      if (p < 0 || n < 0 || static_cast<int>(weights.size()) != n)
        throw ParseError("line " + std::to_string(lineno) + ": 'powers' before p, n, weights");
      state = kPowers;
    } else if (key == "commutators" && state == kPowers) {
      state = kComms;
    } else if (key == "end" && (state == kComms || state == kPowers)) {
      state = kDone;
    } else if (state == kComms) {
      auto colon = line.find(':');
      if (colon == std::string::npos)
        throw ParseError("line " + std::to_string(lineno) + ": expected 'j i : vector'");
      std::istringstream lhs(line.substr(0, colon)), rhs(line.substr(colon + 1));
      auto ji = read_ints(lhs, 2, lineno);
      auto v = read_ints(rhs, n, lineno);
      int j = static_cast<int>(ji[0]), i = static_cast<int>(ji[1]);
      if (i < 1 || j > n || j <= i)
        throw ParseError("line " + std::to_string(lineno) + ": commutator indices need n >= j > i >= 1");
      comms.emplace_back(j - 1, i - 1, to_elem(v, p, lineno));
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unexpected '" + key + "'");
    }
  }
  if (state == kHeader) throw ParseError("missing 'powers' section");
  if (static_cast<int>(powers.size()) != n) throw ParseError("expected " + std::to_string(n) + " power vectors");

  PcPresentation G;
  try {
    G = PcPresentation(p, n, weights);
  } catch (const MalformedPresentation& e) {
    throw ParseError(e.what());
  }
  for (int i = 0; i < n; ++i) G.set_power(i, powers[i]);
  std::vector<char> seen(static_cast<size_t>(n) * n, 0);
  for (auto& [j, i, v] : comms) {
    if (seen[j * n + i]) throw ParseError("duplicate commutator " + std::to_string(j + 1) + " " + std::to_string(i + 1));
    seen[j * n + i] = 1;
    G.set_comm(j, i, v);
  }
  return G;
}

std::string format_presentation(const PcPresentation& G) {
  std::ostringstream os;
  int n = G.n();
  auto vec = [&](const Elem& e) {
    for (int t = 0; t < n; ++t) os << (t ? " " : "") << int(e[t]);
  };
  os << "p " << G.p() << "\n";
  os << "n " << n << "\n";
  os << "weights";
  for (int w : G.weights()) os << ' ' << w;
  os << "\npowers\n";
  for (int i = 0; i < n; ++i) {
    vec(G.power(i));
    os << "\n";
  }
  os << "commutators\n";
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (is_identity(G.comm_rel(j, i))) continue;
      os << j + 1 << ' ' << i + 1 << " : ";
      vec(G.comm_rel(j, i));
      os << "\n";
    }
  os << "end\n";
  return os.str();
}

PcPresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

void save_presentation(const PcPresentation& G, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << format_presentation(G);
}

PcPresentation load_checked(const std::string& path) {
  PcPresentation G = load_presentation(path);
  auto fails = G.consistency_check();
  if (!fails.empty())
    throw MalformedPresentation(path + ": inconsistent at overlap " + fails.front().overlap);
  return G;
}

}  // namespace pf
