#include "lobsim/series_io.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace lobsim {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw SeriesFormatError("line " + std::to_string(line_no) + ": cannot parse '" + s +
                            "' as a number");
  }
  return v;
}

}  // namespace

void write_series_csv(std::ostream& out, const SeriesRecord& record) {
  out << "step,close,volume,tech_active\n";
  for (std::size_t i = 0; i < record.close.size(); ++i) {
    out << record.first_step + static_cast<std::int64_t>(i) << ','
        << record.grid.format(record.close[i]) << ',' << record.volume[i] << ','
        << static_cast<int>(record.tech_active[i]) << '\n';
  }
}

void write_trade_log_csv(std::ostream& out, const SeriesRecord& record) {
  out << "step,price,buyer,seller,buyer_type,seller_type\n";
  auto type = [&](AgentId id) { return record.is_technical(id) ? "technical" : "fundamental"; };
  for (const Trade& t : record.trades) {
    out << t.step << ',' << record.grid.format(t.price) << ',' << t.buyer << ',' << t.seller
        << ',' << type(t.buyer) << ',' << type(t.seller) << '\n';
  }
}

std::vector<double> close_prices(const SeriesRecord& record) {
  std::vector<double> out;
  out.reserve(record.close.size());
  for (Price p : record.close) out.push_back(std::strtod(record.grid.format(p).c_str(), nullptr));
  return out;
}

std::vector<double> read_close_column(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SeriesFormatError("empty CSV");
  const auto header = split_csv_line(line);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "close") col = i;
  }
  if (col == header.size()) throw SeriesFormatError("CSV has no 'close' column");

  std::vector<double> prices;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw SeriesFormatError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
    }
    const double p = parse_number(fields[col], line_no);
    if (!(p > 0.0)) {
      throw std::domain_error("line " + std::to_string(line_no) + ": non-positive price");
    }
    prices.push_back(p);
  }
  return prices;
}

}  // namespace lobsim
