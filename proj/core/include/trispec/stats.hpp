#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace trispec {

// Ordered metric sequence (one value per eigenfunction, lambda-ascending)
// with prefix means and prefix tolerance-exceedance percentages.
struct StatsSeries {
    std::vector<double> values;
    std::vector<double> running_avg;
    // tolerance -> prefix percentage of |v - center| > eps, in [0, 100]
    std::map<double, std::vector<double>> exceedance;
};

// Prefix means a_j = (1/j) sum_{k<=j} v_k.  Throws on an empty sequence.
std::vector<double> running_average(const std::vector<double>& values);

// Prefix percentage of entries with |v - center| > eps.  Throws on eps <= 0
// or an empty sequence.
std::vector<double> running_percentage(const std::vector<double>& values, double center,
                                       double eps);

StatsSeries make_series(const std::vector<double>& values, double center,
                        const std::vector<double>& eps_list);

// Overall means of selected metric columns over the first N rows.
struct SummaryRow {
    std::string metric;
    double mean = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<std::pair<std::string, std::vector<double>>>& columns);

// Summary CSV: triangle_a,num_eigs,metric,mean
void write_summary_csv(std::ostream& os, double triangle_a, std::size_t num_eigs,
                       const std::vector<SummaryRow>& rows);

// Exceedance CSV: index,eps,percentage
void write_exceedance_csv(std::ostream& os, const StatsSeries& series);

}  // namespace trispec
