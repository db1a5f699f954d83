#include "pfjss/mcdm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pfjss/text.hpp"

namespace pfjss {

int Ranking::rank_of(JobId job) const {
  for (const auto& e : entries)
    if (e.job == job) return e.rank;
  throw std::out_of_range("job " + std::to_string(job) + " not in ranking");
}

double Ranking::score_of(JobId job) const {
  for (const auto& e : entries)
    if (e.job == job) return e.score;
  throw std::out_of_range("job " + std::to_string(job) + " not in ranking");
}

Ranking rank_from_scores(std::span<const std::pair<JobId, double>> scores, Orientation o,
                         std::string method) {
  Ranking r;
  r.method = std::move(method);
  for (const auto& [job, score] : scores) {
    if (std::isnan(score))
      throw std::invalid_argument("NaN score for job " + std::to_string(job));
    r.entries.push_back({job, score, 0});
  }
  std::stable_sort(r.entries.begin(), r.entries.end(), [o](const RankEntry& a, const RankEntry& b) {
    if (a.score != b.score) return o == Orientation::Descending ? a.score > b.score : a.score < b.score;
    return a.job < b.job;
  });
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    r.entries[i].rank = static_cast<int>(i + 1);
    if (i > 0 && r.entries[i].score == r.entries[i - 1].score)
      r.notes.push_back("tie at score " + fmt_num(r.entries[i].score) + ": J" +
                        std::to_string(r.entries[i - 1].job) + " before J" +
                        std::to_string(r.entries[i].job));
  }
  return r;
}

namespace {

// Rows sorted by job id so results do not depend on input row order down
// to the last bit.
DecisionMatrix canonical(const DecisionMatrix& m) {
  m.check();
  std::vector<std::size_t> order(m.row_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return m.rows[a] < m.rows[b]; });
  DecisionMatrix c;
  c.weights = m.weights;
  for (auto i : order) {
    c.rows.push_back(m.rows[i]);
    for (std::size_t j = 0; j < m.col_count(); ++j) c.values.push_back(m.at(i, j));
  }
  return c;
}

Ranking finish(const std::vector<JobId>& rows, const std::vector<double>& scores, Orientation o,
               const char* method, std::vector<std::string> notes) {
  std::vector<std::pair<JobId, double>> s;
  for (std::size_t i = 0; i < rows.size(); ++i) s.emplace_back(rows[i], scores[i]);
  auto r = rank_from_scores(s, o, method);
  notes.insert(notes.end(), r.notes.begin(), r.notes.end());
  r.notes = std::move(notes);
  return r;
}

void require_rows(const DecisionMatrix& m) {
  if (m.empty()) throw std::invalid_argument("cannot rank an empty decision matrix");
}

}  // namespace

std::pair<Ranking, TopsisTrace> topsis_rank(const DecisionMatrix& input) {
  require_rows(input);
  auto m = canonical(input);
  const std::size_t n = m.row_count(), k = m.col_count();
  const auto w = m.weights.normalized();
  const auto dir = m.weights.directions();
  std::vector<std::string> notes;

  TopsisTrace t;
  t.rows = m.rows;
  t.normalized.assign(n * k, 0.0);
  t.weighted.assign(n * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double sq = 0;
    for (std::size_t i = 0; i < n; ++i) sq += m.at(i, j) * m.at(i, j);
    double norm = std::sqrt(sq);
    if (norm == 0) {
      t.zero_norm_columns.push_back(j);
      notes.push_back("column " + m.weights.items[j].name + " has zero norm; contributes 0");
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      t.normalized[i * k + j] = m.at(i, j) / norm;
      t.weighted[i * k + j] = w[j] * t.normalized[i * k + j];
    }
  }
  t.ideal.resize(k);
  t.anti_ideal.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double lo = t.weighted[j], hi = t.weighted[j];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, t.weighted[i * k + j]);
      hi = std::max(hi, t.weighted[i * k + j]);
    }
    t.ideal[j] = dir[j] == Direction::Cost ? lo : hi;
    t.anti_ideal[j] = dir[j] == Direction::Cost ? hi : lo;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sp = 0, sm = 0;
    for (std::size_t j = 0; j < k; ++j) {
      double v = t.weighted[i * k + j];
      sp += (v - t.ideal[j]) * (v - t.ideal[j]);
      sm += (v - t.anti_ideal[j]) * (v - t.anti_ideal[j]);
    }
    sp = std::sqrt(sp);
    sm = std::sqrt(sm);
    t.s_plus.push_back(sp);
    t.s_minus.push_back(sm);
    // Coincides with both reference points: nothing separates it from the ideal.
    t.closeness.push_back(sp + sm == 0 ? 1.0 : sm / (sp + sm));
  }
  auto r = finish(t.rows, t.closeness, Orientation::Descending, "TOPSIS", std::move(notes));
  return {std::move(r), std::move(t)};
}

std::pair<Ranking, EdasTrace> edas_rank(const DecisionMatrix& input, EdasAppraisal as) {
  require_rows(input);
  auto m = canonical(input);
  const std::size_t n = m.row_count(), k = m.col_count();
  const auto w = m.weights.normalized();
  const auto dir = m.weights.directions();
  std::vector<std::string> notes;

  EdasTrace t;
  t.rows = m.rows;
  t.average.assign(k, 0.0);
  t.pda.assign(n * k, 0.0);
  t.nda.assign(n * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double sum = 0;
    bool constant = true;
    for (std::size_t i = 0; i < n; ++i) {
      sum += m.at(i, j);
      constant = constant && m.at(i, j) == m.at(0, j);
    }
    double av = sum / static_cast<double>(n);
    t.average[j] = av;
    if (constant) {
      t.constant_columns.push_back(j);
      continue;
    }
    if (av == 0)
      throw std::invalid_argument("EDAS: criterion '" + m.weights.items[j].name +
                                  "' has a zero column average");
    double scale = std::abs(av);
    for (std::size_t i = 0; i < n; ++i) {
      double above = std::max(0.0, m.at(i, j) - av) / scale;
      double below = std::max(0.0, av - m.at(i, j)) / scale;
      bool benefit = dir[j] == Direction::Benefit;
      t.pda[i * k + j] = benefit ? above : below;
      t.nda[i * k + j] = benefit ? below : above;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sp = 0, sn = 0;
    for (std::size_t j = 0; j < k; ++j) {
      sp += w[j] * t.pda[i * k + j];
      sn += w[j] * t.nda[i * k + j];
    }
    t.sp.push_back(sp);
    t.sn.push_back(sn);
  }
  double max_sp = *std::max_element(t.sp.begin(), t.sp.end());
  double max_sn = *std::max_element(t.sn.begin(), t.sn.end());
  if (max_sp == 0) notes.push_back("max SP is 0; NSP set to 0 for all");
  if (max_sn == 0) notes.push_back("max SN is 0; NSN set to 1 for all");
  for (std::size_t i = 0; i < n; ++i) {
    double nsp = max_sp == 0 ? 0.0 : t.sp[i] / max_sp;
    double nsn = max_sn == 0 ? 1.0 : 1.0 - t.sn[i] / max_sn;
    t.nsp.push_back(nsp);
    t.nsn.push_back(nsn);
    t.appraisal.push_back(as == EdasAppraisal::Standard ? 0.5 * (nsp + nsn) : 0.5 * (nsp - nsn));
  }
  auto r = finish(t.rows, t.appraisal, Orientation::Descending, "EDAS", std::move(notes));
  return {std::move(r), std::move(t)};
}

std::pair<Ranking, CpTrace> cp_rank(const DecisionMatrix& input, double p) {
  if (!(p >= 1)) throw std::invalid_argument("CP: distance parameter p must be >= 1");
  require_rows(input);
  auto m = canonical(input);
  const std::size_t n = m.row_count(), k = m.col_count();
  const auto w = m.weights.normalized();
  const auto dir = m.weights.directions();

  CpTrace t;
  t.rows = m.rows;
  t.p = p;
  for (std::size_t j = 0; j < k; ++j) {
    double lo = m.at(0, j), hi = m.at(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, m.at(i, j));
      hi = std::max(hi, m.at(i, j));
    }
    t.ideal.push_back(dir[j] == Direction::Cost ? lo : hi);
    t.anti_ideal.push_back(dir[j] == Direction::Cost ? hi : lo);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0;
    for (std::size_t j = 0; j < k; ++j) {
      double span = t.ideal[j] - t.anti_ideal[j];
      if (span == 0) continue;
      double dev = std::abs((t.ideal[j] - m.at(i, j)) / span);
      if (std::isinf(p))
        acc = std::max(acc, w[j] * dev);
      else
        acc += w[j] * std::pow(dev, p);
    }
    t.distance.push_back(std::isinf(p) ? acc : std::pow(acc, 1.0 / p));
  }
  auto r = finish(t.rows, t.distance, Orientation::Ascending, "CP", {});
  return {std::move(r), std::move(t)};
}

double PreferenceFunction::operator()(double d) const {
  switch (shape) {
    case Shape::Usual: return d > 0 ? 1.0 : 0.0;
    case Shape::Quasi: return d > q ? 1.0 : 0.0;
    case Shape::Linear:
      if (d <= q) return 0.0;
      if (d > s) return 1.0;
      return (d - q) / (s - q);
  }
  return 0.0;
}

std::string PreferenceFunction::describe() const {
  switch (shape) {
    case Shape::Usual: return "usual";
    case Shape::Quasi: return "quasi:" + fmt_num(q);
    case Shape::Linear: return "linear:" + fmt_num(q) + ":" + fmt_num(s);
  }
  return "?";
}

PreferenceFunction PreferenceFunction::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.emplace_back(trim(part));
  auto kind = parts.empty() ? std::string() : to_lower(parts[0]);
  PreferenceFunction f;
  if (kind == "usual" && parts.size() == 1) return f;
  if (kind == "quasi" && parts.size() == 2) {
    f.shape = Shape::Quasi;
    f.q = parse_double(parts[1]);
    if (f.q < 0) throw std::invalid_argument("quasi threshold must be >= 0");
    return f;
  }
  if (kind == "linear" && parts.size() == 3) {
    f.shape = Shape::Linear;
    f.q = parse_double(parts[1]);
    f.s = parse_double(parts[2]);
    if (f.q < 0 || !(f.s > f.q)) throw std::invalid_argument("linear thresholds need 0 <= q < s");
    return f;
  }
  throw std::invalid_argument("unknown preference function '" + spec + "'");
}

std::pair<Ranking, PrometheeTrace> promethee_rank(const DecisionMatrix& input,
                                                  std::span<const PreferenceFunction> prefs) {
  require_rows(input);
  auto m = canonical(input);
  const std::size_t n = m.row_count(), k = m.col_count();
  if (!prefs.empty() && prefs.size() != 1 && prefs.size() != k)
    throw std::invalid_argument("PROMETHEE: need one preference function or one per criterion");
  const PreferenceFunction usual{};
  auto pref = [&](std::size_t j) -> const PreferenceFunction& {
    if (prefs.empty()) return usual;
    return prefs.size() == 1 ? prefs[0] : prefs[j];
  };
  const auto w = m.weights.normalized();
  const auto dir = m.weights.directions();

  PrometheeTrace t;
  t.rows = m.rows;
  t.criteria = k;
  t.deviation.assign(n * n * k, 0.0);
  t.preference.assign(n * n * k, 0.0);
  t.index.assign(n * n, 0.0);
  t.phi_plus.assign(n, 0.0);
  t.phi_minus.assign(n, 0.0);
  auto g = [&](std::size_t i, std::size_t j) {
    return dir[j] == Direction::Cost ? -m.at(i, j) : m.at(i, j);
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      double pi = 0;
      for (std::size_t j = 0; j < k; ++j) {
        double d = g(a, j) - g(b, j);
        double p = pref(j)(d);
        t.deviation[(a * n + b) * k + j] = d;
        t.preference[(a * n + b) * k + j] = p;
        pi += w[j] * p;
      }
      t.index[a * n + b] = pi;
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      t.phi_plus[a] += t.index[a * n + b];
      t.phi_minus[a] += t.index[b * n + a];
    }
  for (std::size_t a = 0; a < n; ++a) t.phi.push_back(t.phi_plus[a] - t.phi_minus[a]);
  auto r = finish(t.rows, t.phi, Orientation::Descending, "PROMETHEE", {});
  return {std::move(r), std::move(t)};
}

namespace {

void section(std::ostringstream& out, const std::string& name, const std::vector<JobId>& rows,
             std::span<const std::string> cols, const std::vector<double>& v) {
  out << name;
  for (const auto& c : cols) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << 'J' << rows[i];
    for (std::size_t j = 0; j < cols.size(); ++j) out << ',' << fmt_num(v[i * cols.size() + j]);
    out << '\n';
  }
}

void vector_row(std::ostringstream& out, const std::string& name, const std::vector<double>& v) {
  out << name;
  for (double x : v) out << ',' << fmt_num(x);
  out << '\n';
}

void per_row(std::ostringstream& out, const std::vector<JobId>& rows,
             std::initializer_list<std::pair<const char*, const std::vector<double>*>> cols) {
  out << "job";
  for (const auto& c : cols) out << ',' << c.first;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << 'J' << rows[i];
    for (const auto& c : cols) out << ',' << fmt_num((*c.second)[i]);
    out << '\n';
  }
}

}  // namespace

std::string trace_csv(const TopsisTrace& t, std::span<const std::string> cols) {
  std::ostringstream out;
  section(out, "normalized", t.rows, cols, t.normalized);
  section(out, "weighted", t.rows, cols, t.weighted);
  vector_row(out, "ideal", t.ideal);
  vector_row(out, "anti_ideal", t.anti_ideal);
  per_row(out, t.rows, {{"s_plus", &t.s_plus}, {"s_minus", &t.s_minus}, {"closeness", &t.closeness}});
  return out.str();
}

std::string trace_csv(const EdasTrace& t, std::span<const std::string> cols) {
  std::ostringstream out;
  vector_row(out, "average", t.average);
  section(out, "pda", t.rows, cols, t.pda);
  section(out, "nda", t.rows, cols, t.nda);
  per_row(out, t.rows,
          {{"sp", &t.sp}, {"sn", &t.sn}, {"nsp", &t.nsp}, {"nsn", &t.nsn}, {"as", &t.appraisal}});
  return out.str();
}

std::string trace_csv(const CpTrace& t, std::span<const std::string>) {
  std::ostringstream out;
  out << "p," << fmt_num(t.p) << '\n';
  vector_row(out, "ideal", t.ideal);
  vector_row(out, "anti_ideal", t.anti_ideal);
  per_row(out, t.rows, {{"lp", &t.distance}});
  return out.str();
}

std::string trace_csv(const PrometheeTrace& t, std::span<const std::string> cols) {
  std::ostringstream out;
  const std::size_t n = t.rows.size(), k = t.criteria;
  out << "a,b";
  for (const auto& c : cols) out << ",d_" << c;
  for (const auto& c : cols) out << ",p_" << c;
  out << ",pi\n";
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      out << 'J' << t.rows[a] << ",J" << t.rows[b];
      for (std::size_t j = 0; j < k; ++j) out << ',' << fmt_num(t.deviation[(a * n + b) * k + j]);
      for (std::size_t j = 0; j < k; ++j) out << ',' << fmt_num(t.preference[(a * n + b) * k + j]);
      out << ',' << fmt_num(t.index[a * n + b]) << '\n';
    }
  per_row(out, t.rows, {{"phi_plus", &t.phi_plus}, {"phi_minus", &t.phi_minus}, {"phi", &t.phi}});
  return out.str();
}

}  // namespace pfjss
