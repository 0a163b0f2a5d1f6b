#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace clustvar::oracle {

std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

Matrix recode_columns(const VariableSet& vs, const std::vector<std::size_t>& members) {
  const std::size_t n = vs.n_obs();
  Matrix cols;
  for (std::size_t j : members) {
    const auto& v = vs.variable(j);
    if (v.is_quantitative()) {
      double mean = 0.0;
      for (double x : v.values) mean += x;
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (double x : v.values) var += (x - mean) * (x - mean);
      const double sd = std::sqrt(var / static_cast<double>(n));
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = (v.values[i] - mean) / sd;
      cols.push_back(col);
    }
  }
  for (std::size_t j : members) {
    const auto& v = vs.variable(j);
    if (v.is_qualitative()) {
      for (std::size_t s = 0; s < v.levels.size(); ++s) {
        double ns = 0.0;
        for (int c : v.codes) ns += (c == static_cast<int>(s)) ? 1.0 : 0.0;
        const double f = ns / static_cast<double>(n);
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double g = v.codes[i] == static_cast<int>(s) ? 1.0 : 0.0;
          col[i] = (g - f) * std::sqrt(static_cast<double>(n) / ns);
        }
        cols.push_back(col);
      }
    }
  }
  return cols;
}

std::vector<double> spectrum(const VariableSet& vs, const std::vector<std::size_t>& members) {
  const auto cols = recode_columns(vs, members);
  const std::size_t m = cols.size();
  const double n = static_cast<double>(vs.n_obs());
  Matrix gram(m, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < cols[a].size(); ++i) s += cols[a][i] * cols[b][i];
      gram[a][b] = s / n;
    }
  return jacobi_eigenvalues(gram);
}

double leading_eigenvalue(const VariableSet& vs, const std::vector<std::size_t>& members) {
  return spectrum(vs, members).front();
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double eta_squared(const std::vector<double>& u, const Variable& z) {
  double mean = 0.0;
  for (double x : u) mean += x;
  mean /= static_cast<double>(u.size());
  double total = 0.0;
  for (double x : u) total += (x - mean) * (x - mean);
  double between = 0.0;
  for (std::size_t s = 0; s < z.levels.size(); ++s) {
    double sum = 0.0, count = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (z.codes[i] == static_cast<int>(s)) {
        sum += u[i];
        count += 1.0;
      }
    }
    if (count > 0) between += count * (sum / count - mean) * (sum / count - mean);
  }
  return between / total;
}

std::vector<OracleMerge> brute_force_hclust(const VariableSet& vs) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t j = 0; j < vs.n_vars(); ++j) clusters.push_back({j});
  auto h = [&](const std::vector<std::size_t>& c) {
    return c.size() == 1 ? 1.0 : leading_eigenvalue(vs, c);
  };
  std::vector<OracleMerge> out;
  while (clusters.size() > 1) {
    const std::size_t m = clusters.size();
    std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        auto both = clusters[a];
        both.insert(both.end(), clusters[b].begin(), clusters[b].end());
        std::sort(both.begin(), both.end());
        d[a][b] = h(clusters[a]) + h(clusters[b]) - h(both);
        best = std::min(best, d[a][b]);
      }
    std::size_t ba = 0, bb = 0;
    std::pair<std::size_t, std::size_t> key{SIZE_MAX, SIZE_MAX};
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        if (d[a][b] > best + 1e-12) continue;
        const auto ma = clusters[a].front(), mb = clusters[b].front();
        const std::pair<std::size_t, std::size_t> k{std::min(ma, mb), std::max(ma, mb)};
        if (k < key) {
          key = k;
          ba = a;
          bb = b;
        }
      }
    if (clusters[bb].front() < clusters[ba].front()) std::swap(ba, bb);
    double height = d[std::min(ba, bb)][std::max(ba, bb)];
    if (height < 0 && height >= -1e-10) height = 0;
    out.push_back({clusters[ba], clusters[bb], height});
    auto both = clusters[ba];
    both.insert(both.end(), clusters[bb].begin(), clusters[bb].end());
    std::sort(both.begin(), both.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(std::max(ba, bb)));
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(std::min(ba, bb)));
    clusters.push_back(both);
  }
  return out;
}

VariableSet random_mixed(std::uint64_t seed, std::size_t n, std::size_t p, double quali_share) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  // A few latent factors so that clusters exist.
  const std::size_t factors = 2 + rng() % 2;
  std::vector<std::vector<double>> latent(factors, std::vector<double>(n));
  for (auto& f : latent)
    for (auto& x : f) x = normal(rng);

  std::vector<Variable> vars;
  for (std::size_t j = 0; j < p; ++j) {
    const auto& f = latent[rng() % factors];
    const double noise = 0.3 + unit(rng);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = f[i] + noise * normal(rng);
    const std::string name = "v" + std::to_string(j);
    if (unit(rng) < quali_share) {
      const std::size_t levels = 2 + rng() % 3;
      // Cut the latent signal into quantile bins so every level is observed.
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
      std::vector<std::optional<std::string>> labels(n);
      for (std::size_t r = 0; r < n; ++r) {
        labels[order[r]] = "L" + std::to_string(r * levels / n);
      }
      vars.push_back(Variable::qualitative(name, labels));
    } else {
      vars.push_back(Variable::quantitative(name, x));
    }
  }
  return VariableSet(std::move(vars));
}

VariableSet random_quantitative(std::uint64_t seed, std::size_t n, std::size_t p) {
  return random_mixed(seed, n, p, 0.0);
}

namespace {

struct NewickReader {
  const std::string& s;
  std::size_t pos = 0;

  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
  void expect(char c) {
    if (peek() != c) throw std::runtime_error(std::string("newick: expected '") + c + "'");
    ++pos;
  }
  std::string label() {
    std::string out;
    if (peek() == '\'') {
      ++pos;
      while (true) {
        if (pos >= s.size()) throw std::runtime_error("newick: unterminated quote");
        if (s[pos] == '\'') {
          if (pos + 1 < s.size() && s[pos + 1] == '\'') {
            out += '\'';
            pos += 2;
            continue;
          }
          ++pos;
          break;
        }
        out += s[pos++];
      }
      return out;
    }
    while (pos < s.size() && std::string("(),:;").find(s[pos]) == std::string::npos) out += s[pos++];
    return out;
  }
  NewickNode node() {
    NewickNode n;
    if (peek() == '(') {
      ++pos;
      n.children.push_back(node());
      while (peek() == ',') {
        ++pos;
        n.children.push_back(node());
      }
      expect(')');
    }
    n.label = label();
    if (peek() == ':') {
      ++pos;
      std::size_t used = 0;
      n.length = std::stod(s.substr(pos), &used);
      n.has_length = true;
      pos += used;
    }
    return n;
  }
};

}  // namespace

NewickNode parse_newick(const std::string& text) {
  NewickReader r{text};
  auto root = r.node();
  r.expect(';');
  if (r.pos != text.size()) throw std::runtime_error("newick: trailing text");
  return root;
}

std::size_t count_leaves(const NewickNode& node) {
  if (node.children.empty()) return 1;
  std::size_t total = 0;
  for (const auto& c : node.children) total += count_leaves(c);
  return total;
}

}  // namespace clustvar::oracle
