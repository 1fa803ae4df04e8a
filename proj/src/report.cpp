#include "ising/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ising/errors.hpp"
#include "ising/json_io.hpp"
#include "ising/stats.hpp"

namespace ising {

namespace {

using json = nlohmann::json;

std::vector<json> tagged_rows(const std::vector<ExperimentRecord>& records) {
    std::vector<json> rows;
    for (const auto& rec : records) {
        for (const auto& r : rec.rows) {
            json t = r;
            t["experiment"] = to_string(rec.spec.id);
            rows.push_back(std::move(t));
        }
    }
    return rows;
}

std::string csv_cell(const json& v) {
    if (!v.is_string()) return v.dump();
    std::string s = "\"";
    for (char c : v.get<std::string>()) {
        if (c == '"') s += '"';
        s += c;
    }
    return s + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = was_quoted = true;
        } else if (c == ',') {
            out.push_back(was_quoted ? "\"" + cur : cur);
            cur.clear();
            was_quoted = false;
        } else {
            cur += c;
        }
    }
    out.push_back(was_quoted ? "\"" + cur : cur);
    return out;
}

std::string render_csv(const std::vector<json>& rows) {
    std::vector<std::string> keys{"experiment"};
    for (const auto& r : rows)
        for (const auto& [k, v] : r.items())
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    std::string out;
    for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + keys[i];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) out += ",";
            if (r.contains(keys[i])) out += csv_cell(r[keys[i]]);
        }
        out += "\n";
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string render_svg(const std::vector<ExperimentRecord>& records) {
    const double W = 640, H = 420, L = 60, R = 20, T = 30, B = 50;
    struct Series {
        std::string label;
        std::vector<double> x, y;
    };
    std::vector<Series> series;
    for (const auto& rec : records) {
        const auto [xk, yk] = plot_axes(rec.spec.id);
        std::map<std::string, std::size_t> group;
        for (const auto& r : rec.rows) {
            if (!r.contains(xk) || !r.contains(yk) || !r[xk].is_number() || !r[yk].is_number()) continue;
            const double x = r[xk].get<double>(), y = r[yk].get<double>();
            if (!(x > 0) || !(y > 0)) continue;
            std::string label = to_string(rec.spec.id) + " " + yk;
            if (r.contains("bc") && r["bc"].is_string()) label += " " + r["bc"].get<std::string>();
            if (r.contains("p") && r.contains("q")) label += " (" + r["p"].dump() + "," + r["q"].dump() + ")";
            auto it = group.find(label);
            if (it == group.end()) {
                it = group.emplace(label, series.size()).first;
                series.push_back({label, {}, {}});
            }
            series[it->second].x.push_back(std::log10(x));
            series[it->second].y.push_back(std::log10(y));
        }
    }
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) x0 = x1 = s.x[i], y0 = y1 = s.y[i], first = false;
            x0 = std::min(x0, s.x[i]), x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]), y1 = std::max(y1, s.y[i]);
        }
    if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"12\">log10 x ["
      << fmt(x0) << ", " << fmt(x1) << "]</text>\n";
    o << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2
      << ")\" text-anchor=\"middle\">log10 y [" << fmt(y0) << ", " << fmt(y1) << "]</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = colors[k % 6];
        for (std::size_t i = 0; i < s.x.size(); ++i)
            o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
        std::string label = s.label;
        if (s.x.size() >= 2) {
            const LineFit f = fit_line(s.x, s.y);
            const double a = *std::min_element(s.x.begin(), s.x.end()), b = *std::max_element(s.x.begin(), s.x.end());
            o << "<line x1=\"" << fmt(px(a)) << "\" y1=\"" << fmt(py(f.intercept + f.slope * a)) << "\" x2=\"" << fmt(px(b))
              << "\" y2=\"" << fmt(py(f.intercept + f.slope * b)) << "\" stroke=\"" << c << "\"/>\n";
            label += " slope " + fmt(f.slope);
        }
        o << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 * (k + 1) << "\" font-size=\"11\" fill=\"" << c << "\">" << label
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace

ReportFormat report_format_from(const std::string& s) {
    if (s == "jsonl" || s == "json-lines") return ReportFormat::JsonLines;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "svg" || s == "svg-plot-data") return ReportFormat::Svg;
    throw DomainError("unknown report format '" + s + "'");
}

std::pair<std::string, std::string> plot_axes(ExperimentId id) {
    switch (id) {
        case ExperimentId::THM: return {"n", "residual"};
        case ExperimentId::OPT: return {"n", "worst_residual"};
        case ExperimentId::CROSS: return {"n", "p_ge2"};
        case ExperimentId::FLUCT: return {"n", "spread"};
        case ExperimentId::RELAX: return {"n", "difference"};
        case ExperimentId::OZ: return {"r", "prefactor"};
        case ExperimentId::RANDBC: return {"n", "fraction"};
        case ExperimentId::DUAL: return {"n", "margin"};
    }
    return {"n", "residual"};
}

std::string render_report(const std::vector<ExperimentRecord>& records, ReportFormat format) {
    switch (format) {
        case ReportFormat::JsonLines: {
            std::string out;
            for (const auto& r : tagged_rows(records)) out += r.dump() + "\n";
            return out;
        }
        case ReportFormat::Csv: return render_csv(tagged_rows(records));
        case ReportFormat::Svg: return render_svg(records);
    }
    return {};
}

void emit_report(const std::vector<ExperimentRecord>& records, ReportFormat format, const std::string& path) {
    write_text_file(path, render_report(records, format));
}

std::vector<json> parse_report(const std::string& text, ReportFormat format) {
    std::vector<json> rows;
    std::istringstream in(text);
    std::string line;
    if (format == ReportFormat::JsonLines) {
        while (std::getline(in, line))
            if (!line.empty()) rows.push_back(json::parse(line));
        return rows;
    }
    if (format != ReportFormat::Csv) throw DomainError("only jsonl and csv reports can be parsed");
    if (!std::getline(in, line)) return rows;
    const auto keys = csv_split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = csv_split(line);
        json r = json::object();
        for (std::size_t i = 0; i < keys.size() && i < cells.size(); ++i) {
            if (cells[i].empty()) continue;
            if (cells[i][0] == '"') r[keys[i]] = cells[i].substr(1);
            else r[keys[i]] = json::parse(cells[i]);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ising
