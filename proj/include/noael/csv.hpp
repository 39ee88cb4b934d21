#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noael/dataset.hpp"

namespace noael {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    for (auto& c : cells) {
        std::size_t a = c.find_first_not_of(" \t");
        std::size_t b = c.find_last_not_of(" \t");
        c = (a == std::string::npos) ? std::string() : c.substr(a, b - a + 1);
    }
    return cells;
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return value;
}

struct RawRow {
    std::string dose_label;
    double dose_value;
    std::vector<double> fields;  // response, or time/status
};

// Groups rows by dose, sorted ascending; control = smallest dose
// (or the rows matching control_label, which get dose 0).
inline std::vector<std::pair<DoseGroup, std::vector<std::vector<double>>>>
group_rows(std::vector<RawRow>& rows) {
    std::map<double, std::pair<std::string, std::vector<std::vector<double>>>> by_dose;
    for (auto& r : rows) {
        auto it = by_dose.find(r.dose_value);
        if (it == by_dose.end()) {
            it = by_dose.emplace(r.dose_value,
                                 std::make_pair(r.dose_label,
                                                std::vector<std::vector<double>>{})).first;
        } else if (it->second.first != r.dose_label) {
            throw data_error("two dose labels map to the same dose value: \"" +
                             it->second.first + "\" and \"" + r.dose_label + "\"");
        }
        it->second.second.push_back(r.fields);
    }
    std::vector<std::pair<DoseGroup, std::vector<std::vector<double>>>> out;
    int idx = 0;
    for (auto& [dose, lab_rows] : by_dose) {
        DoseGroup g;
        g.label = lab_rows.first;
        g.dose_value = dose;
        g.index = idx++;
        g.n = static_cast<int>(lab_rows.second.size());
        out.emplace_back(std::move(g), std::move(lab_rows.second));
    }
    return out;
}

}  // namespace detail

/// Parses CSV text into a dataset. Continuous/score endpoints expect columns
/// `dose,response`; incidence expects `dose,time,status`. Control is the
/// smallest dose unless control_label names a (possibly non-numeric) coding.
inline DoseResponseDataset parse_csv(std::istream& in, EndpointKind kind,
                                     const std::string& control_label = {}) {
    std::string header_line;
    if (!std::getline(in, header_line)) throw data_error("empty input: no header row");
    // Strip a UTF-8 BOM if present.
    if (header_line.rfind("\xEF\xBB\xBF", 0) == 0) header_line.erase(0, 3);

    std::vector<std::string> header = detail::split_csv_line(header_line);
    std::vector<std::string> wanted = kind == EndpointKind::incidence
        ? std::vector<std::string>{"dose", "time", "status"}
        : std::vector<std::string>{"dose", "response"};
    std::vector<int> col(wanted.size(), -1);
    for (std::size_t h = 0; h < header.size(); ++h) {
        for (std::size_t w = 0; w < wanted.size(); ++w) {
            if (header[h] == wanted[w]) {
                if (col[w] >= 0) throw data_error("duplicate header column \"" + wanted[w] + "\"");
                col[w] = static_cast<int>(h);
            }
        }
    }
    for (std::size_t w = 0; w < wanted.size(); ++w)
        if (col[w] < 0) throw data_error("missing required column \"" + wanted[w] + "\"");

    std::vector<detail::RawRow> rows;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() < header.size())
            throw data_error("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " cells");
        detail::RawRow r;
        r.dose_label = cells[col[0]];
        if (!control_label.empty() && r.dose_label == control_label) {
            r.dose_value = 0.0;
        } else {
            auto d = detail::parse_number(r.dose_label);
            if (!d) throw data_error("line " + std::to_string(lineno) +
                                     ": non-numeric dose \"" + r.dose_label + "\"");
            if (*d < 0.0) throw data_error("line " + std::to_string(lineno) + ": negative dose");
            r.dose_value = *d;
        }
        for (std::size_t w = 1; w < wanted.size(); ++w) {
            const std::string& cell = cells[col[w]];
            auto v = detail::parse_number(cell);
            if (!v) throw data_error("line " + std::to_string(lineno) +
                                     ": non-numeric " + wanted[w] + " \"" + cell + "\"");
            r.fields.push_back(*v);
        }
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw data_error("no data rows");
    if (!control_label.empty()) {
        bool seen = false;
        for (const auto& r : rows) seen = seen || r.dose_label == control_label;
        if (!seen) throw data_error("control label \"" + control_label + "\" not present");
    }

    auto grouped = detail::group_rows(rows);

    if (kind == EndpointKind::continuous) {
        ContinuousDataset ds;
        for (auto& [g, obs] : grouped) {
            ds.groups.push_back(g);
            std::vector<double> v;
            for (auto& f : obs) v.push_back(f[0]);
            ds.observations.push_back(std::move(v));
        }
        validate(ds);
        return ds;
    }
    if (kind == EndpointKind::score) {
        ScoreDataset ds;
        for (auto& [g, obs] : grouped) {
            ds.groups.push_back(g);
            std::vector<int> v;
            for (auto& f : obs) {
                double x = f[0];
                if (x != std::floor(x) || x < 0.0)
                    throw data_error("score values must be nonnegative integers");
                v.push_back(static_cast<int>(x));
            }
            ds.observations.push_back(std::move(v));
        }
        validate(ds);
        return ds;
    }
    IncidenceDataset ds;
    for (auto& [g, obs] : grouped) {
        ds.groups.push_back(g);
        std::vector<AnimalRecord> v;
        for (auto& f : obs) {
            AnimalRecord a;
            a.time = f[0];
            double st = f[1];
            if (st != 0.0 && st != 1.0)
                throw data_error("status must be 0 or 1 for group \"" + g.label + "\"");
            a.status = static_cast<int>(st);
            v.push_back(a);
        }
        ds.animals.push_back(std::move(v));
    }
    validate(ds);
    return ds;
}

inline DoseResponseDataset parse_csv(const std::string& text, EndpointKind kind,
                                     const std::string& control_label = {}) {
    std::istringstream in(text);
    return parse_csv(in, kind, control_label);
}

namespace detail {

inline std::string full_precision(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(shorter, "%lf", &back);
        if (back == x) return shorter;
    }
    return buf;
}

}  // namespace detail

/// Serializes a dataset back to the CSV form accepted by parse_csv.
/// Round-trips exactly: parse(to_csv(ds)) == ds.
inline std::string to_csv(const DoseResponseDataset& ds) {
    std::ostringstream out;
    if (const auto* c = std::get_if<ContinuousDataset>(&ds)) {
        out << "dose,response\n";
        for (std::size_t i = 0; i < c->groups.size(); ++i)
            for (double x : c->observations[i])
                out << c->groups[i].label << ',' << detail::full_precision(x) << '\n';
    } else if (const auto* s = std::get_if<ScoreDataset>(&ds)) {
        out << "dose,response\n";
        for (std::size_t i = 0; i < s->groups.size(); ++i)
            for (int x : s->observations[i])
                out << s->groups[i].label << ',' << x << '\n';
    } else {
        const auto& inc = std::get<IncidenceDataset>(ds);
        out << "dose,time,status\n";
        for (std::size_t i = 0; i < inc.groups.size(); ++i)
            for (const auto& a : inc.animals[i])
                out << inc.groups[i].label << ',' << detail::full_precision(a.time)
                    << ',' << a.status << '\n';
    }
    return out.str();
}

}  // namespace noael
