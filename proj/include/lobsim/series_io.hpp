#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "lobsim/engine.hpp"

namespace lobsim {

class SeriesFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `step,close,volume,tech_active`, close in currency at tick resolution.
void write_series_csv(std::ostream& out, const SeriesRecord& record);

/// `step,price,buyer,seller,buyer_type,seller_type`.
void write_trade_log_csv(std::ostream& out, const SeriesRecord& record);

/// Closing prices exactly as they read back from the series CSV.
std::vector<double> close_prices(const SeriesRecord& record);

/// Reads the `close` column of a CSV with a header row. Throws
/// SeriesFormatError on a missing column, ragged row or unparsable number,
/// and std::domain_error on a non-positive price.
std::vector<double> read_close_column(std::istream& in);

}  // namespace lobsim
