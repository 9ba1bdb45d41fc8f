#ifndef MUBAND_CSV_HPP
#define MUBAND_CSV_HPP

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "muband/errors.hpp"
#include "muband/numeric.hpp"

namespace muband {

// One table destined for a CSV file and/or a console dump. Numbers are
// rendered with 17 significant digits so a written double reads back
// bit-identically.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    Table& add_row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) {
            throw Error("Table: row width does not match header");
        }
        rows_.push_back(std::move(cells));
        return *this;
    }

    void write_csv(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open " + path + " for writing");
        out << join(header_) << "\n";
        for (const auto& row : rows_) out << join(row) << "\n";
    }

    void print(std::ostream& os) const {
        std::vector<std::size_t> width(header_.size(), 0);
        for (std::size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                width[c] = std::max(width[c], display(row[c]).size());
            }
        }
        print_row(os, header_, width);
        for (const auto& row : rows_) print_row(os, row, width);
    }

    static std::string cell(double v) { return format_double(v); }
    static std::string cell(double v, int precision) { return format_double(v, precision); }
    static std::string cell(long long v) { return std::to_string(v); }
    static std::string cell(int v) { return std::to_string(v); }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        return out;
    }

    // Console view shortens the 17-digit cells to something readable.
    static std::string display(const std::string& cell) {
        if (cell.size() <= 12) return cell;
        const bool numeric = cell.find_first_not_of("0123456789+-.eE") == std::string::npos;
        if (!numeric) return cell;
        try {
            return format_double(std::stod(cell), 8);
        } catch (...) {
            return cell;
        }
    }

    static void print_row(std::ostream& os, const std::vector<std::string>& row,
                          const std::vector<std::size_t>& width) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string v = display(row[c]);
            os << v;
            if (c + 1 < row.size()) os << std::string(width[c] + 2 - v.size(), ' ');
        }
        os << "\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace muband

#endif // MUBAND_CSV_HPP
