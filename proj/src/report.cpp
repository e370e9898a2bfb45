#include "crowds/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <unordered_set>
#include <vector>

namespace crowds {

namespace {

void append_int(std::string& out, long long v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.append(buf, ptr);
}

// fixed two-decimal coordinates keep the documents byte-stable
void append_coord(std::string& out, double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    (void)ec;
    out.append(buf, ptr);
}

bool parse_int_field(std::string_view s, int& v) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    return ec == std::errc{} && ptr == end;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::vector<std::size_t> sorted_order(const ProfileTable& table, PlotSpec::SortKey key) {
    std::vector<std::size_t> order(table.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (key == PlotSpec::SortKey::node) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return table.rows[a].node < table.rows[b].node;
        });
        return order;
    }
    auto tuple_for = [&](std::size_t i) {
        const NodeProfile& r = table.rows[i];
        int primary = 0;
        switch (key) {
        case PlotSpec::SortKey::pi: primary = r.pi; break;
        case PlotSpec::SortKey::s: primary = r.S; break;
        case PlotSpec::SortKey::d: primary = r.D; break;
        case PlotSpec::SortKey::node: break;
        }
        return std::tuple<int, int, int, const NodeId&>(primary, r.S, r.D, r.node);
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return tuple_for(a) < tuple_for(b); });
    return order;
}

struct Layout {
    double ml = 18.0, mr = 60.0, mt = 34.0, mb = 46.0;
    double pw = 0.0, ph = 0.0;

    double panel_stride() const { return ml + pw + mr; }
};

constexpr double kStub = 3.0; // bar height for values at or below the log floor

void render_panel(std::string& svg, const ProfileTable& table, const PlotSpec& spec,
                  const Layout& lay, std::string_view title, double ox, double top) {
    const double left = ox + lay.ml;
    const double bottom = lay.mt + lay.ph;
    const double log_top = std::log10(top);
    auto y_of = [&](double v) {
        if (v <= 1.0) return bottom;
        return bottom - std::log10(v) / log_top * lay.ph;
    };

    // decade gridlines with right-hand labels
    for (double decade = 10.0; decade <= top; decade *= 10.0) {
        const double y = y_of(decade);
        svg += "<line x1=\"";
        append_coord(svg, left);
        svg += "\" y1=\"";
        append_coord(svg, y);
        svg += "\" x2=\"";
        append_coord(svg, left + lay.pw);
        svg += "\" y2=\"";
        append_coord(svg, y);
        svg += "\" stroke=\"#cccccc\" stroke-dasharray=\"3 3\"/>\n";
        svg += "<text x=\"";
        append_coord(svg, left + lay.pw + 5.0);
        svg += "\" y=\"";
        append_coord(svg, y + 4.0);
        svg += "\" font-family=\"sans-serif\" font-size=\"11\">";
        append_int(svg, static_cast<long long>(std::llround(decade)));
        svg += "</text>\n";
    }
    svg += "<text x=\"";
    append_coord(svg, left + lay.pw + 5.0);
    svg += "\" y=\"";
    append_coord(svg, bottom + 4.0);
    svg += "\" font-family=\"sans-serif\" font-size=\"11\">1</text>\n";

    const auto order = sorted_order(table, spec.sort_key);
    const std::size_t count = order.size();
    const double bar_w = lay.pw / static_cast<double>(count);

    int max_d = 0;
    for (const NodeProfile& r : table.rows) max_d = std::max(max_d, r.D);

    for (std::size_t i = 0; i < count; ++i) {
        const NodeProfile& r = table.rows[order[i]];
        const double x = left + bar_w * static_cast<double>(i);
        double y = r.S > 0 ? y_of(r.S) : bottom - kStub;
        double h = bottom - y;
        if (h < kStub) {
            h = kStub;
            y = bottom - kStub;
        }
        const int shade =
            max_d > 0 ? 230 - static_cast<int>(std::llround(190.0 * r.D / max_d)) : 230;
        svg += "<rect x=\"";
        append_coord(svg, x);
        svg += "\" y=\"";
        append_coord(svg, y);
        svg += "\" width=\"";
        append_coord(svg, bar_w);
        svg += "\" height=\"";
        append_coord(svg, h);
        svg += "\" fill=\"rgb(";
        append_int(svg, shade);
        svg += ",";
        append_int(svg, shade);
        svg += ",";
        append_int(svg, shade);
        svg += ")\"/>\n";
    }

    // pi overlay across bar centers
    if (count == 1) {
        const NodeProfile& r = table.rows[order[0]];
        svg += "<circle cx=\"";
        append_coord(svg, left + bar_w * 0.5);
        svg += "\" cy=\"";
        append_coord(svg, r.pi > 0 ? y_of(r.pi) : bottom);
        svg += "\" r=\"2.5\" fill=\"#000000\"/>\n";
    } else {
        svg += "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < count; ++i) {
            const NodeProfile& r = table.rows[order[i]];
            if (i) svg += " ";
            append_coord(svg, left + bar_w * (static_cast<double>(i) + 0.5));
            svg += ",";
            append_coord(svg, r.pi > 0 ? y_of(r.pi) : bottom);
        }
        svg += "\"/>\n";
    }

    // frame, x ticks at fifths, captions
    svg += "<rect x=\"";
    append_coord(svg, left);
    svg += "\" y=\"";
    append_coord(svg, lay.mt);
    svg += "\" width=\"";
    append_coord(svg, lay.pw);
    svg += "\" height=\"";
    append_coord(svg, lay.ph);
    svg += "\" fill=\"none\" stroke=\"#888888\"/>\n";

    static constexpr std::string_view kTickLabels[] = {"0", "0.2", "0.4", "0.6", "0.8", "1"};
    for (int t = 0; t <= 5; ++t) {
        const double x = left + lay.pw * t / 5.0;
        svg += "<line x1=\"";
        append_coord(svg, x);
        svg += "\" y1=\"";
        append_coord(svg, bottom);
        svg += "\" x2=\"";
        append_coord(svg, x);
        svg += "\" y2=\"";
        append_coord(svg, bottom + 4.0);
        svg += "\" stroke=\"#888888\"/>\n";
        svg += "<text x=\"";
        append_coord(svg, x);
        svg += "\" y=\"";
        append_coord(svg, bottom + 16.0);
        svg += "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">";
        svg += kTickLabels[t];
        svg += "</text>\n";
    }
    svg += "<text x=\"";
    append_coord(svg, left + lay.pw / 2.0);
    svg += "\" y=\"";
    append_coord(svg, bottom + 32.0);
    svg += "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
           "proportion of nodes</text>\n";
    svg += "<text x=\"";
    append_coord(svg, left + lay.pw / 2.0);
    svg += "\" y=\"";
    append_coord(svg, bottom + 44.0);
    svg += "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#555555\" "
           "text-anchor=\"middle\">bars: S (darker = higher D, max ";
    append_int(svg, max_d);
    svg += "), line: pi, log scale</text>\n";

    if (!title.empty()) {
        svg += "<text x=\"";
        append_coord(svg, left + lay.pw / 2.0);
        svg += "\" y=\"";
        append_coord(svg, lay.mt - 12.0);
        svg += "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">";
        svg += xml_escape(title);
        svg += "</text>\n";
    }
}

std::string render_document(std::span<const std::pair<std::string, const ProfileTable*>> panels,
                            const PlotSpec& spec) {
    if (panels.empty()) throw ValidationError("at least one panel is required");
    for (std::size_t i = 0; i < panels.size(); ++i) {
        if (panels[i].second->rows.empty()) {
            std::string msg = "panel " + std::to_string(i + 1);
            if (!panels[i].first.empty()) msg += " ('" + panels[i].first + "')";
            msg += " has an empty table; profile the graph first";
            throw ValidationError(msg);
        }
    }

    double top = 10.0;
    if (spec.y_max > 0.0) {
        top = std::max(spec.y_max, 10.0);
    } else {
        double max_val = 0.0;
        for (const auto& [name, table] : panels)
            for (const NodeProfile& r : table->rows)
                max_val = std::max({max_val, static_cast<double>(r.S),
                                    static_cast<double>(r.pi)});
        while (top < max_val) top *= 10.0;
    }

    Layout lay;
    lay.pw = spec.panel_width;
    lay.ph = spec.panel_height;
    const double width = lay.panel_stride() * static_cast<double>(panels.size());
    const double height = lay.mt + lay.ph + lay.mb;

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
    append_coord(svg, width);
    svg += "\" height=\"";
    append_coord(svg, height);
    svg += "\" viewBox=\"0 0 ";
    append_coord(svg, width);
    svg += " ";
    append_coord(svg, height);
    svg += "\">\n<rect x=\"0\" y=\"0\" width=\"";
    append_coord(svg, width);
    svg += "\" height=\"";
    append_coord(svg, height);
    svg += "\" fill=\"#ffffff\"/>\n";

    for (std::size_t i = 0; i < panels.size(); ++i)
        render_panel(svg, *panels[i].second, spec, lay, panels[i].first,
                     lay.panel_stride() * static_cast<double>(i), top);

    svg += "</svg>\n";
    return svg;
}

} // namespace

std::string write_profile_csv(const ProfileTable& table) {
    std::vector<std::size_t> order(table.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return table.rows[a].node < table.rows[b].node;
    });

    std::string out = "node,S,D,pi,h\n";
    for (std::size_t i : order) {
        const NodeProfile& r = table.rows[i];
        out += r.node;
        out += ',';
        append_int(out, r.S);
        out += ',';
        append_int(out, r.D);
        out += ',';
        append_int(out, r.pi);
        out += ',';
        append_int(out, r.h);
        out += '\n';
    }
    return out;
}

ProfileTable read_profile_csv(std::istream& in) {
    ProfileTable table;
    std::string line;
    std::size_t lineno = 0;
    std::unordered_set<std::string> seen;

    if (!std::getline(in, line)) throw ParseError("line 1: missing header");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "node,S,D,pi,h")
        throw ParseError("line 1: expected header 'node,S,D,pi,h'");

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::string_view s = line;
        std::size_t start = 0;
        while (start <= s.size()) {
            std::size_t end = s.find(',', start);
            if (end == std::string_view::npos) end = s.size();
            fields.push_back(s.substr(start, end - start));
            start = end + 1;
        }
        if (fields.size() != 5)
            throw ParseError("line " + std::to_string(lineno) + ": expected 5 fields");
        if (fields[0].empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty node id");

        NodeProfile r;
        r.node = std::string(fields[0]);
        if (!parse_int_field(fields[1], r.S) || !parse_int_field(fields[2], r.D) ||
            !parse_int_field(fields[3], r.pi) || !parse_int_field(fields[4], r.h))
            throw ParseError("line " + std::to_string(lineno) + ": bad integer field");
        if (!seen.insert(r.node).second)
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate node '" +
                                  r.node + "'");
        table.rows.push_back(std::move(r));
    }
    if (in.bad()) throw IoError("error reading profile CSV stream");
    return table;
}

std::string render_sullivan_plot(const ProfileTable& table, const PlotSpec& spec,
                                 std::string_view title) {
    const std::pair<std::string, const ProfileTable*> panel{std::string(title), &table};
    return render_document({&panel, 1}, spec);
}

std::string render_multi_panel(
    std::span<const std::pair<std::string, ProfileTable>> panels, const PlotSpec& spec) {
    std::vector<std::pair<std::string, const ProfileTable*>> view;
    view.reserve(panels.size());
    for (const auto& [name, table] : panels) view.emplace_back(name, &table);
    return render_document(view, spec);
}

} // namespace crowds
