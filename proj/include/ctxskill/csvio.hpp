#ifndef CTXSKILL_CSVIO_HPP
#define CTXSKILL_CSVIO_HPP

#include <string>
#include <vector>

namespace ctxskill {

// Locale-independent shortest round-trip decimal formatting (to_chars).
std::string format_double(double v);

std::string join_csv_row(const std::vector<double>& row);

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace ctxskill

#endif
