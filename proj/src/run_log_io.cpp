#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "smbo/errors.hpp"
#include "smbo/smbo.hpp"

namespace smbo {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string run_file_name(const RunConfig& config) {
  return "f" + std::to_string(config.function_id) + "_d" + std::to_string(config.dimension) + "_i" +
         std::to_string(config.instance_id) + "_" + std::string(to_string(config.infill)) + "_s" +
         std::to_string(config.seed) + ".csv";
}

std::string to_csv(const RunLog& log) {
  const std::size_t d = log.config.dimension;
  std::string out = "iteration";
  for (std::size_t j = 1; j <= d; ++j) out += ",x_" + std::to_string(j);
  out += ",y,gap,best_gap,nn_distance,model_nll,wall_time_ms\n";
  for (const IterationRecord& r : log.records) {
    out += std::to_string(r.iteration);
    for (double v : r.x) out += "," + format_double(v);
    out += "," + format_double(r.y);
    out += "," + format_double(r.gap);
    out += "," + format_double(r.best_gap);
    out += ",";
    if (r.nn_distance) out += format_double(*r.nn_distance);
    out += ",";
    if (r.model_nll) out += format_double(*r.model_nll);
    out += "," + format_double(r.wall_time_ms);
    out += "\n";
  }
  return out;
}

void write_run_log(const RunLog& log, const std::filesystem::path& path) {
  // Written under a temporary name first so a crash never leaves a partial log.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << to_csv(log);
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view field, std::size_t line_no) {
  const std::string s(field);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigParseError("run log line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

std::optional<double> parse_optional(std::string_view field, std::size_t line_no) {
  if (field.empty()) return std::nullopt;
  return parse_double(field, line_no);
}

}  // namespace

RunLog parse_run_log(std::string_view csv, std::string_view file_name) {
  RunLog log;
  std::size_t line_no = 0;
  std::size_t d = 0;
  double best = HUGE_VAL;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (line_no == 1) {
      if (fields.size() < 8 || fields.front() != "iteration")
        throw ConfigParseError("run log: unexpected header");
      d = fields.size() - 7;
      for (std::size_t j = 0; j < d; ++j)
        if (fields[1 + j] != "x_" + std::to_string(j + 1)) throw ConfigParseError("run log: bad header");
      const std::vector<std::string_view> tail(fields.end() - 6, fields.end());
      const std::vector<std::string_view> expected{"y", "gap", "best_gap", "nn_distance", "model_nll",
                                                   "wall_time_ms"};
      if (tail != expected) throw ConfigParseError("run log: bad header");
      continue;
    }
    if (fields.size() != d + 7)
      throw ConfigParseError("run log line " + std::to_string(line_no) + ": wrong field count");
    IterationRecord r;
    std::size_t iter = 0;
    const auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), iter);
    if (ec != std::errc{} || p != fields[0].data() + fields[0].size())
      throw ConfigParseError("run log line " + std::to_string(line_no) + ": bad iteration");
    r.iteration = iter;
    for (std::size_t j = 0; j < d; ++j) r.x.push_back(parse_double(fields[1 + j], line_no));
    r.y = parse_double(fields[d + 1], line_no);
    r.gap = parse_double(fields[d + 2], line_no);
    r.best_gap = parse_double(fields[d + 3], line_no);
    r.nn_distance = parse_optional(fields[d + 4], line_no);
    r.model_nll = parse_optional(fields[d + 5], line_no);
    r.wall_time_ms = parse_double(fields[d + 6], line_no);
    best = std::min(best, r.y);
    r.best_so_far = best;
    log.records.push_back(std::move(r));
  }
  if (line_no == 0) throw ConfigParseError("run log: empty file");

  log.config.dimension = d;
  log.config.total_budget = log.records.size();
  static const std::regex name_re(R"(f(\d+)_d(\d+)_i(\d+)_(ei|pm|random)_s(\d+)\.csv)");
  std::cmatch m;
  if (!file_name.empty() && std::regex_match(file_name.begin(), file_name.end(), m, name_re)) {
    log.config.function_id = std::stoi(m[1].str());
    if (std::stoul(m[2].str()) != d) throw ConfigParseError("run log: dimension mismatch with file name");
    log.config.instance_id = std::stoi(m[3].str());
    log.config.infill = *parse_criterion(m[4].str());
    log.config.seed = std::stoull(m[5].str());
  }
  return log;
}

RunLog read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_log(buf.str(), path.filename().string());
}

}  // namespace smbo
