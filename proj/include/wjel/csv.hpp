#pragma once

#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wjel/errors.hpp"
#include "wjel/estimating.hpp"
#include "wjel/numeric.hpp"

namespace wjel {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(pos)));
            return out;
        }
        out.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
}

}  // namespace detail

// Reads the named columns of a comma-separated file into observations, one
// per data row, coordinates in the requested column order. Plain CSV only:
// no quoting, first line is the header, blank lines are skipped, CRLF
// accepted. Every data row must have the full header width.
inline Sample read_csv_columns(const std::string& path, std::span<const std::string> columns) {
    if (columns.empty()) throw DomainError("read_csv_columns: no columns requested");
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file, header expected", 0);
    std::vector<std::string> header;
    for (std::string_view field : detail::split_fields(line)) header.emplace_back(field);

    std::vector<std::size_t> pick;
    pick.reserve(columns.size());
    for (const std::string& name : columns) {
        std::size_t idx = header.size();
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == name) {
                idx = j;
                break;
            }
        if (idx == header.size()) throw MissingColumn(path + ": no column named " + name);
        pick.push_back(idx);
    }

    Sample data;
    long row = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        ++row;
        const std::vector<std::string_view> fields = detail::split_fields(line);
        if (fields.size() != header.size())
            throw ParseError(path + " row " + std::to_string(row) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             row);
        Observation obs(columns.size());
        for (std::size_t c = 0; c < pick.size(); ++c) {
            if (!detail::parse_double(fields[pick[c]], obs[c]))
                throw ParseError(path + " row " + std::to_string(row) + ": bad number in column " +
                                     columns[c] + ": " + std::string(fields[pick[c]]),
                                 row);
        }
        data.push_back(std::move(obs));
    }
    return data;
}

}  // namespace wjel
