#include "sqz/table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sqz {

void CurveTable::append(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("CurveTable: row width does not match header");
    for (double v : row)
        if (!std::isfinite(v)) throw std::invalid_argument("CurveTable: non-finite value");
    rows.push_back(std::move(row));
}

void CurveTable::write_csv(std::ostream& os) const {
    if (!provenance.empty()) os << "# " << provenance << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << "\n";
    }
}

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace sqz
