#include "trispec/stats.hpp"

#include <cmath>
#include <ostream>

#include "trispec/domain.hpp"
#include "trispec/textio.hpp"

namespace trispec {

std::vector<double> running_average(const std::vector<double>& values) {
    if (values.empty())
        throw InvalidParameter("running_average: empty sequence");
    std::vector<double> avg(values.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        sum += values[j];
        avg[j] = sum / static_cast<double>(j + 1);
    }
    return avg;
}

std::vector<double> running_percentage(const std::vector<double>& values, double center,
                                       double eps) {
    if (values.empty())
        throw InvalidParameter("running_percentage: empty sequence");
    if (!(eps > 0.0))
        throw InvalidParameter("running_percentage: eps must be positive");
    std::vector<double> pct(values.size());
    std::size_t exceed = 0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (std::abs(values[j] - center) > eps) ++exceed;
        pct[j] = 100.0 * static_cast<double>(exceed) / static_cast<double>(j + 1);
    }
    return pct;
}

StatsSeries make_series(const std::vector<double>& values, double center,
                        const std::vector<double>& eps_list) {
    StatsSeries s;
    s.values = values;
    s.running_avg = running_average(values);
    for (double eps : eps_list) s.exceedance[eps] = running_percentage(values, center, eps);
    return s;
}

std::vector<SummaryRow> summarize(
    const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
    std::vector<SummaryRow> rows;
    for (const auto& [name, values] : columns) {
        if (values.empty()) continue;
        rows.push_back({name, running_average(values).back()});
    }
    return rows;
}

void write_summary_csv(std::ostream& os, double triangle_a, std::size_t num_eigs,
                       const std::vector<SummaryRow>& rows) {
    os << "triangle_a,num_eigs,metric,mean\n";
    for (const auto& r : rows)
        os << fmt_double(triangle_a) << ',' << num_eigs << ',' << r.metric << ','
           << fmt_double(r.mean) << '\n';
}

void write_exceedance_csv(std::ostream& os, const StatsSeries& series) {
    os << "index,eps,percentage\n";
    for (const auto& [eps, pct] : series.exceedance)
        for (std::size_t j = 0; j < pct.size(); ++j)
            os << j << ',' << fmt_double(eps) << ',' << fmt_double(pct[j]) << '\n';
}

}  // namespace trispec
