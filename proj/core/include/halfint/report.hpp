#pragma once

#include <filesystem>
#include <string>

#include "halfint/stats.hpp"

namespace halfint {

// Shortest round-trip decimal for a double (std::to_chars), so identical
// runs emit identical bytes.  No locale, no fixed widths, no timestamps.
std::string format_double(double v);

// CSV: one versioned comment header line carrying kind and meta, a column
// header, then data rows.  Columns for density reports are frozen as
//   series,x,count,pi,excluded,ratio,reference
// (reference empty when a series has none).
std::string density_csv(const DensityReport& rep);
std::string density_json(const DensityReport& rep);

// Histogram tables: bin,lo,hi,count,mass,reference (edges as exact
// rationals); joint tables: i,j,lo1,hi1,lo2,hi2,count,mass,reference.
std::string histogram_csv(const Histogram& h);
std::string histogram_json(const Histogram& h);
std::string joint_csv(const JointHistogram& h);
std::string joint_json(const JointHistogram& h);

// Plot-ready text: two columns (bin center, empirical mass) for marginal
// histograms; three columns (center1, center2, mass) in gnuplot grid
// blocks for joint histograms.
std::string histogram_gnuplot(const Histogram& h);
std::string joint_gnuplot(const JointHistogram& h);

// Truncated analytic-density table: s,partial_sum,normalizer,estimate.
std::string analytic_csv(const AnalyticDensityReport& rep);
std::string analytic_json(const AnalyticDensityReport& rep);

// Disagreement exhibits: the density report plus the full prime list.
std::string disagreement_primes_text(const DisagreementReport& rep);
std::string disagreement_json(const DisagreementReport& rep);

// Write content to path (parent directories created); throws
// std::runtime_error on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace halfint
