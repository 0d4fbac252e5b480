// Plot-ready numeric tables and their CSV form: '.' decimal, comma
// separator, one header row, shortest round-trip number formatting.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sqz {

struct CurveTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string provenance;  // which command/config produced the table

    // Rejects ragged or non-finite rows.
    void append(std::vector<double> row);
    void write_csv(std::ostream& os) const;
};

// Locale-independent shortest representation that round-trips exactly.
std::string format_double(double value);

}  // namespace sqz
