#include "stiefel_cayley/serialize.hpp"

#include <iomanip>
#include <ostream>
#include <utility>
#include <vector>

namespace stiefel_cayley {

json to_json(const Mat& m) {
  const std::size_t kc = components(m.field());
  const auto comps = m.components();
  json data = json::array();
  for (std::size_t e = 0; e < m.rows() * m.cols(); ++e) {
    json entry = json::array();
    for (std::size_t c = 0; c < kc; ++c) entry.push_back(comps[e * kc + c]);
    data.push_back(std::move(entry));
  }
  return json{{"field", std::string(to_string(m.field()))},
              {"rows", m.rows()},
              {"cols", m.cols()},
              {"data", std::move(data)}};
}

Mat matrix_from_json(const json& j) {
  try {
    const Field field = parse_field(j.at("field").get<std::string>());
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& data = j.at("data");
    const std::size_t kc = components(field);
    if (!data.is_array() || data.size() != rows * cols)
      throw InvalidArgument("matrix json: data must hold rows*cols entries");
    std::vector<double> packed;
    packed.reserve(rows * cols * kc);
    for (const json& entry : data) {
      if (!entry.is_array() || entry.size() != kc)
        throw InvalidArgument("matrix json: entry must have " +
                              std::to_string(kc) + " components");
      for (const json& v : entry) packed.push_back(v.get<double>());
    }
    return Mat::from_components(field, rows, cols, std::move(packed));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("matrix json: ") + e.what());
  }
}

json to_json(const StiefelPoint& x) {
  json j{{"n", x.n()}, {"k", x.k()}};
  j.update(to_json(x.matrix()));
  return j;
}

StiefelPoint stiefel_point_from_json(const json& j) {
  Mat m = matrix_from_json(j);
  try {
    if (j.contains("n") && j.at("n").get<std::size_t>() != m.rows())
      throw InvalidArgument("stiefel json: n does not match rows");
    if (j.contains("k") && j.at("k").get<std::size_t>() != m.cols())
      throw InvalidArgument("stiefel json: k does not match cols");
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("stiefel json: ") + e.what());
  }
  return StiefelPoint(std::move(m));
}

json to_json(const Lift& lift) {
  return json{{"n", lift.n()}, {"k", lift.k()}, {"A", to_json(lift.matrix())}};
}

Lift lift_from_json(const json& j) {
  try {
    const auto k = j.at("k").get<std::size_t>();
    GroupElement a(matrix_from_json(j.at("A")));
    if (j.contains("n") && j.at("n").get<std::size_t>() != a.n())
      throw InvalidArgument("lift json: n does not match A");
    return Lift(std::move(a), k);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("lift json: ") + e.what());
  }
}

json to_json(const IterationRecord& r) {
  return json{{"iter", r.iter},
              {"f", r.f},
              {"gnorm", r.gnorm},
              {"step", r.step},
              {"backtracks", r.backtracks}};
}

void write_trace_jsonl(std::ostream& os, const OptimTrace& trace) {
  for (const auto& r : trace.records) os << to_json(r).dump() << '\n';
  os << json{{"reason", std::string(to_string(trace.reason))}}.dump() << '\n';
}

void write_trace_csv(std::ostream& os, const OptimTrace& trace) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << "iter,f,gnorm,step,backtracks\n" << std::setprecision(17);
  for (const auto& r : trace.records)
    os << r.iter << ',' << r.f << ',' << r.gnorm << ',' << r.step << ','
       << r.backtracks << '\n';
  os.flags(flags);
  os.precision(precision);
}

json to_json(const CoverReport& report) {
  json histogram = json::object();
  for (const auto& [multiplicity, count] : report.multiplicity_histogram)
    histogram[std::to_string(multiplicity)] = count;
  json witnesses = json::array();
  for (const Mat& w : report.witnesses) witnesses.push_back(to_json(w));
  return json{{"n", report.n},
              {"k", report.k},
              {"field", std::string(to_string(report.field))},
              {"angles", report.angles},
              {"samples", report.samples},
              {"uncovered", report.uncovered},
              {"multiplicity_histogram", std::move(histogram)},
              {"witnesses", std::move(witnesses)}};
}

}  // namespace stiefel_cayley
