#pragma once

#include <string>
#include <vector>

namespace hqnn {

// Rows are ground truth, columns are prediction.
struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<long long> counts;

    long long& at(int truth, int pred) {
        return counts[static_cast<std::size_t>(truth) * n_classes + pred];
    }
    long long at(int truth, int pred) const {
        return counts[static_cast<std::size_t>(truth) * n_classes + pred];
    }
    long long total() const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& ground_truths,
                                 const std::vector<int>& predictions, int n_classes);

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassificationReport {
    std::vector<ClassScores> per_class;
    std::vector<long long> support;  // ground-truth count per class
    double accuracy = 0.0;
    ClassScores macro_avg;
    ClassScores weighted_avg;  // weighted by support
};

// One-vs-rest precision/recall/F1 per class plus overall accuracy.
// Zero denominators yield 0.
ClassificationReport report(const ConfusionMatrix& cm);

// Aligned plain-text table, 2 decimals, columns Precision / Recall / F1 Score.
std::string report_text(const ClassificationReport& rep,
                        const std::vector<std::string>& class_names);

// Full-precision CSV: one row per class, then accuracy/macro/weighted rows.
std::string report_csv(const ClassificationReport& rep,
                       const std::vector<std::string>& class_names);

std::string confusion_csv(const ConfusionMatrix& cm);

}  // namespace hqnn
