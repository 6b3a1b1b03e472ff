#include "tailscope/returns.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "tailscope/error.h"
#include "tailscope/text_format.h"

namespace tailscope {

ReturnSeries log_returns(const BarSeries& bars) {
    const auto& p = bars.prices();
    if (p.size() < 2) throw Error("log returns need at least 2 bars");
    ReturnSeries out;
    out.values.resize(p.size() - 1);
    for (std::size_t t = 1; t < p.size(); ++t) out.values[t - 1] = std::log(p[t]) - std::log(p[t - 1]);
    out.start = bars.timestamp(1);
    out.interval = bars.interval();
    return out;
}

ReturnSeries standardize(const ReturnSeries& returns) {
    const auto& v = returns.values;
    if (v.size() < 2) throw Error("standardize needs at least 2 returns");
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw Error("degenerate series");

    ReturnSeries out = returns;
    for (double& x : out.values) x = (x - mean) / sd;
    out.standardized = true;
    out.mean_used = mean;
    out.sd_used = sd;
    return out;
}

void write_returns(std::ostream& out, const ReturnSeries& returns) {
    out << "timestamp,return\n";
    for (std::size_t i = 0; i < returns.values.size(); ++i)
        out << returns.timestamp(i) << ',' << format_double(returns.values[i]) << '\n';
}

ReturnSeries read_returns(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestamp,return")
        throw Error("return file must start with header 'timestamp,return'");
    ReturnSeries out;
    std::vector<std::int64_t> times;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line), ',');
        const auto ts = fields.size() == 2 ? parse_integer(fields[0]) : std::nullopt;
        const auto value = fields.size() == 2 ? parse_double(fields[1]) : std::nullopt;
        if (!ts || !value) throw Error("malformed return at line " + std::to_string(line_no));
        times.push_back(*ts);
        out.values.push_back(*value);
    }
    if (times.empty()) throw Error("no records");
    out.start = times.front();
    out.interval = times.size() > 1 ? times[1] - times[0] : 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] - times[i - 1] != out.interval) throw Error("returns are not uniformly spaced");
    }
    return out;
}

}  // namespace tailscope
