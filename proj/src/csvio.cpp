#include "fedpne/csvio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fedpne {

namespace {

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

[[noreturn]] void line_fail(const std::string& path, size_t lineno, const std::string& what) {
  throw std::runtime_error(path + " line " + std::to_string(lineno) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) io_fail(path, "write failed");
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_num(const std::string& s, const std::string& path, size_t lineno) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    line_fail(path, lineno, "bad numeric field '" + s + "'");
  return v;
}

long long parse_ll(const std::string& s, const std::string& path, size_t lineno) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    line_fail(path, lineno, "bad integer field '" + s + "'");
  return v;
}

std::string chomp(std::string line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  return line;
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_trace(const RunTrace& trace, const std::string& path) {
  size_t dim = trace.pulls.empty() ? 1 : trace.pulls.front().x.size();
  auto out = open_out(path);
  out << "client,round,phase,depth,node_index";
  for (size_t d = 0; d < dim; ++d) out << ",x" << d;
  out << ",reward,regret_increment\n";
  for (const PullRecord& p : trace.pulls) {
    if (p.x.size() != dim) io_fail(path, "inconsistent point dimension in trace");
    out << p.client << ',' << p.round << ',' << p.phase << ',' << p.depth << ','
        << p.node_index;
    for (double xd : p.x) out << ',' << format_double(xd);
    out << ',' << format_double(p.reward) << ',' << format_double(p.regret_inc) << '\n';
  }
  finish_out(out, path);
}

std::vector<PullRecord> parse_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) io_fail(path, "missing header line");
  auto header = split_line(chomp(line));
  if (header.size() < 7 || header[0] != "client" || header[1] != "round" ||
      header[2] != "phase" || header[3] != "depth" || header[4] != "node_index" ||
      header[header.size() - 2] != "reward" || header.back() != "regret_increment")
    line_fail(path, 1, "unexpected trace header");
  size_t dim = header.size() - 7;
  for (size_t d = 0; d < dim; ++d)
    if (header[5 + d] != "x" + std::to_string(d))
      line_fail(path, 1, "unexpected trace header");

  std::vector<PullRecord> pulls;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = chomp(line);
    if (line.empty()) continue;
    auto f = split_line(line);
    if (f.size() != 7 + dim)
      line_fail(path, lineno, "expected " + std::to_string(7 + dim) + " fields, got " +
                                  std::to_string(f.size()));
    PullRecord p;
    p.client = (int)parse_ll(f[0], path, lineno);
    p.round = parse_ll(f[1], path, lineno);
    p.phase = (int)parse_ll(f[2], path, lineno);
    p.depth = (int)parse_ll(f[3], path, lineno);
    p.node_index = (uint64_t)parse_ll(f[4], path, lineno);
    p.x.resize(dim);
    for (size_t d = 0; d < dim; ++d) p.x[d] = parse_num(f[5 + d], path, lineno);
    p.reward = parse_num(f[5 + dim], path, lineno);
    p.regret_inc = parse_num(f[6 + dim], path, lineno);
    pulls.push_back(std::move(p));
  }
  return pulls;
}

void emit_summary(const AggregatedRegret& agg, const std::string& path) {
  if (agg.mean.size() != agg.stddev.size())
    io_fail(path, "summary mean/std length mismatch");
  auto out = open_out(path);
  out << "round,mean_avg_regret,std_avg_regret,n_seeds\n";
  for (size_t t = 0; t < agg.mean.size(); ++t)
    out << (t + 1) << ',' << format_double(agg.mean[t]) << ','
        << format_double(agg.stddev[t]) << ',' << agg.n_seeds << '\n';
  finish_out(out, path);
}

AggregatedRegret parse_summary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) io_fail(path, "missing header line");
  if (chomp(line) != "round,mean_avg_regret,std_avg_regret,n_seeds")
    line_fail(path, 1, "unexpected summary header");
  AggregatedRegret agg;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = chomp(line);
    if (line.empty()) continue;
    auto f = split_line(line);
    if (f.size() != 4) line_fail(path, lineno, "expected 4 fields");
    long long round = parse_ll(f[0], path, lineno);
    if (round != (long long)agg.mean.size() + 1)
      line_fail(path, lineno, "rounds out of order");
    agg.mean.push_back(parse_num(f[1], path, lineno));
    agg.stddev.push_back(parse_num(f[2], path, lineno));
    agg.n_seeds = (int)parse_ll(f[3], path, lineno);
  }
  return agg;
}

void emit_communication(const RunTrace& trace, const std::string& path) {
  auto out = open_out(path);
  out << "phase,depth,active_nodes,eliminated,events\n";
  for (const PhaseRecord& ph : trace.phases) {
    long long elim = 0;
    for (char e : ph.eliminated) elim += e ? 1 : 0;
    out << ph.phase << ',' << ph.depth << ',' << ph.active.size() << ',' << elim << ','
        << ph.events << '\n';
  }
  finish_out(out, path);
}

} // namespace fedpne
