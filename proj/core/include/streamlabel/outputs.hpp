#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamlabel/config.hpp"
#include "streamlabel/harness.hpp"

namespace streamlabel {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kRoundsHeader =
    "trial,t,x_repr,labeled,prediction,true_value,error,cum_loss,uncertainty,threshold";
inline constexpr const char* kSummaryHeader =
    "t,mean_avg_loss,ci_halfwidth,mean_avg_error,err_ci_halfwidth,mean_cum_labels";

// Shortest round-trip decimal form ("%.17g"; inf and nan spelled out).
std::string format_real(double v);

std::string rounds_csv(const std::vector<TrialResult>& results);
std::string summary_csv(const Summary& summary);

// Writes rounds.csv, summary.csv, loss.svg and error.svg into `dir`
// (created if missing). Throws OutputError naming the failing path.
void emit_outputs(const std::vector<TrialResult>& results, const ExperimentConfig& config,
                  const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace streamlabel
