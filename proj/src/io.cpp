#include "latgeo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace latgeo {

namespace fs = std::filesystem;

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

DataFormat guess_format(const fs::path& path) {
  return path.extension() == ".json" ? DataFormat::json : DataFormat::csv;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

namespace {

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw IngestError(std::string("malformed JSON: ") + e.what());
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  return Matrix::from_rows(rows);
}

// Rows of numbers from a JSON array, with row numbers in errors.
std::vector<std::vector<double>> json_rows(const Json& arr, const std::string& field) {
  if (!arr.is_array()) throw IngestError("'" + field + "' must be an array of rows");
  if (arr.empty()) throw IngestError("empty input: '" + field + "' has no rows");
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for (std::size_t r = 0; r < arr.size(); ++r) {
    const Json& row = arr[r];
    if (!row.is_array()) throw IngestError("row " + std::to_string(r + 1) + ": expected an array of numbers");
    if (r == 0) width = row.size();
    if (row.size() != width || width == 0)
      throw IngestError("ragged rows: row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                        " values, expected " + std::to_string(width));
    std::vector<double> values;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number())
        throw IngestError("row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                          ": non-numeric value " + row[c].dump());
      const double v = row[c].get<double>();
      if (!std::isfinite(v))
        throw IngestError("row " + std::to_string(r + 1) + ": non-finite value");
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  return rows;
}

}  // namespace

Json frame_to_json(const SimplexFrame& frame) {
  Json j;
  j["dim"] = frame.dim();
  j["count"] = frame.count();
  j["side"] = frame.side();
  j["directions"] = frame.directions().to_rows();
  return j;
}

SimplexFrame frame_from_json(const Json& j) {
  for (const char* key : {"dim", "count", "side", "directions"})
    if (!j.contains(key)) throw IngestError(std::string("frame: missing field '") + key + "'");
  if (!j["dim"].is_number_unsigned()) throw IngestError("frame: 'dim' must be a positive integer");
  if (!j["count"].is_number_unsigned()) throw IngestError("frame: 'count' must be a positive integer");
  if (!j["side"].is_number()) throw IngestError("frame: 'side' must be a number");
  const auto dim = j["dim"].get<std::size_t>(), count = j["count"].get<std::size_t>();
  const auto rows = json_rows(j["directions"], "directions");
  if (rows.size() != count)
    throw IngestError("frame: 'count' is " + std::to_string(count) + " but 'directions' has " +
                      std::to_string(rows.size()) + " rows");
  if (rows[0].size() != dim)
    throw IngestError("frame: 'dim' is " + std::to_string(dim) + " but directions have " +
                      std::to_string(rows[0].size()) + " coordinates");
  SimplexFrame frame = [&] {
    try {
      return SimplexFrame::from_points(rows_to_matrix(rows));
    } catch (const std::invalid_argument& e) {
      throw IngestError(std::string("frame: ") + e.what());
    }
  }();
  const double side = j["side"].get<double>();
  if (!(std::abs(frame.side() - side) <= 1e-9 * std::max(1.0, side)))
    throw IngestError("frame: 'side' is " + format_number(side) + " but the directions give " +
                      format_number(frame.side()));
  return frame;
}

void write_frame(const fs::path& path, const SimplexFrame& frame) { write_json(path, frame_to_json(frame)); }

SimplexFrame read_frame(const fs::path& path) { return frame_from_json(parse_json_text(read_text(path))); }

SampleSet parse_samples_csv(std::string_view text, Provenance provenance) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  bool header_seen = false, first = true, has_label = false;
  std::size_t width = 0, line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      double tmp;
      const bool numeric = std::all_of(cells.begin(), cells.end(), [&](std::string_view c) {
        return parse_number(c, tmp);
      });
      if (!numeric) {
        header_seen = true;
        has_label = cells.back() == "label";
        width = cells.size();
        if (has_label && width < 2) throw IngestError("header: a label column needs at least one coordinate column");
        continue;
      }
      width = cells.size();
    }
    if (cells.size() != width)
      throw IngestError("ragged rows: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                        " fields, expected " + std::to_string(width));
    const std::size_t coords = has_label ? width - 1 : width;
    std::vector<double> values(coords);
    for (std::size_t c = 0; c < coords; ++c) {
      if (!parse_number(cells[c], values[c]))
        throw IngestError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                          ": non-numeric value '" + std::string(cells[c]) + "'");
      if (!std::isfinite(values[c]))
        throw IngestError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                          ": non-finite value '" + std::string(cells[c]) + "'");
    }
    if (has_label) {
      const std::string_view cell = cells.back();
      int y = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), y);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw IngestError("line " + std::to_string(line_no) + ": label '" + std::string(cell) +
                          "' is not an integer");
      labels.push_back(y);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw IngestError(header_seen ? "empty input: header but no data rows" : "empty input: no data rows");
  return SampleSet(rows_to_matrix(rows), provenance,
                   has_label ? std::optional<std::vector<int>>(std::move(labels)) : std::nullopt);
}

SampleSet parse_samples_json(std::string_view text, Provenance provenance) {
  const Json j = parse_json_text(text);
  if (j.is_array()) return SampleSet(rows_to_matrix(json_rows(j, "points")), provenance);
  if (!j.is_object()) throw IngestError("samples JSON must be an array of rows or an object with 'points'");
  const char* key = j.contains("points") ? "points" : j.contains("modes") ? "modes" : nullptr;
  if (!key) throw IngestError("samples JSON: missing field 'points'");
  const auto rows = json_rows(j[key], key);
  std::optional<std::vector<int>> labels;
  if (j.contains("labels")) {
    const Json& l = j["labels"];
    if (!l.is_array() || l.size() != rows.size())
      throw IngestError("samples JSON: 'labels' must be an array with one integer per point");
    labels.emplace();
    for (const auto& y : l) {
      if (!y.is_number_integer()) throw IngestError("samples JSON: 'labels' must hold integers");
      labels->push_back(y.get<int>());
    }
  }
  std::optional<std::uint64_t> seed;
  if (j.contains("seed") && j["seed"].is_number_unsigned()) seed = j["seed"].get<std::uint64_t>();
  return SampleSet(rows_to_matrix(rows), provenance, std::move(labels), seed);
}

SampleSet read_samples(const fs::path& path, Provenance provenance) {
  const std::string text = read_text(path);
  try {
    return guess_format(path) == DataFormat::json ? parse_samples_json(text, provenance)
                                                  : parse_samples_csv(text, provenance);
  } catch (const IngestError& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
}

ModeSet read_modes(const fs::path& path) {
  const SampleSet s = read_samples(path, Provenance::real);
  try {
    return ModeSet(s.points());
  } catch (const std::invalid_argument& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
}

std::string samples_to_csv(const SampleSet& samples) {
  std::string out;
  for (std::size_t k = 0; k < samples.ambient_dim(); ++k) {
    if (k) out += ',';
    out += 'x' + std::to_string(k);
  }
  if (samples.labels()) out += ",label";
  out += '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const VecView p = samples.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out += ',';
      out += format_number(p[k]);
    }
    if (samples.labels()) out += ',' + std::to_string((*samples.labels())[i]);
    out += '\n';
  }
  return out;
}

void write_samples(const fs::path& path, const SampleSet& samples) { write_text(path, samples_to_csv(samples)); }

Json generation_sidecar(const GeneratorStar& gstar, std::size_t n, std::uint64_t seed) {
  Json j;
  j["seed"] = seed;
  j["n"] = n;
  j["epsilon"] = gstar.epsilon();
  j["L"] = gstar.lipschitz_budget();
  return j;
}

Json report_to_json(const MetricReport& report) {
  Json j;
  j["schema"] = "1";
  j["metric"] = report.metric;
  j["value"] = report.value;
  j["ci"] = report.ci ? Json::array({report.ci->first, report.ci->second}) : Json(nullptr);
  if (report.seed) j["seed"] = *report.seed;
  Json params = Json::object();
  for (const auto& [key, value] : report.params)
    std::visit([&](const auto& v) { params[key] = v; }, value);
  j["params"] = params;
  return j;
}

Json bound_to_json(const BoundReport& b) {
  Json j;
  j["bound_name"] = b.bound_name;
  j["epsilon"] = b.epsilon;
  j["m"] = b.m;
  j["d"] = b.d ? Json(*b.d) : Json(nullptr);
  j["L"] = b.lipschitz ? Json(*b.lipschitz) : Json(nullptr);
  j["leading_value"] = b.leading_value;
  j["order_term"] = b.order_term;
  j["regime"] = b.regime;
  j["valid"] = b.valid;
  j["precondition_met"] = b.precondition_met ? Json(*b.precondition_met) : Json(nullptr);
  return j;
}

std::string bound_csv_header() {
  return "bound_name,epsilon,m,d,L,leading_value,order_term,regime,valid,precondition_met";
}

std::string bound_csv_row(const BoundReport& b) {
  std::string row = b.bound_name + ',' + format_number(b.epsilon) + ',' + std::to_string(b.m) + ',';
  row += (b.d ? std::to_string(*b.d) : "") + ',';
  row += (b.lipschitz ? format_number(*b.lipschitz) : "") + ',';
  row += format_number(b.leading_value) + ',' + format_number(b.order_term) + ',' + b.regime + ',';
  row += b.valid ? "true," : "false,";
  row += b.precondition_met ? (*b.precondition_met ? "true" : "false") : "";
  return row;
}

Json estimate_to_json(const MeasureEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["ci"] = Json::array({e.lower, e.upper});
  j["half_width"] = e.half_width;
  j["hits"] = e.hits;
  j["samples"] = e.samples;
  j["seed"] = e.seed;
  return j;
}

Json sandwich_to_json(const SandwichReport& r) {
  Json j;
  j["alpha_hat"] = estimate_to_json(r.alpha_hat);
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["eps_min"] = r.eps_min;
  j["eps_max"] = r.eps_max;
  j["boundary_eps_max"] = estimate_to_json(r.boundary_max);
  j["boundary_eps_min"] = estimate_to_json(r.boundary_min);
  j["slack_lower"] = r.slack_lower;
  j["slack_upper"] = r.slack_upper;
  j["holds"] = r.holds;
  return j;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "d,epsilon_max,alpha_hat,alpha_lower,alpha_upper,lower_bound,lower_order_term,lower_valid,upper_bound,upper_valid,optimized\n";
  for (const auto& r : rows) {
    out += std::to_string(r.d) + ',' + format_number(r.epsilon_max) + ',' + format_number(r.alpha_hat.value) + ',' +
           format_number(r.alpha_hat.lower) + ',' + format_number(r.alpha_hat.upper) + ',' +
           format_number(r.lower_bound) + ',' + format_number(r.lower_order_term) + ',' +
           (r.lower_valid ? "true" : "false") + ',' + format_number(r.upper_bound) + ',' +
           (r.upper_valid ? "true" : "false") + ',' + (r.optimized ? "true" : "false") + '\n';
  }
  return out;
}

std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "n,k,coverage,error\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + format_number(r.coverage) + ',' +
           format_number(r.error) + '\n';
  return out;
}

}  // namespace latgeo
