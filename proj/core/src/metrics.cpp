#include "hqnn/metrics.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hqnn {

long long ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0LL);
}

ConfusionMatrix confusion_matrix(const std::vector<int>& ground_truths,
                                 const std::vector<int>& predictions, int n_classes) {
    if (ground_truths.size() != predictions.size())
        throw std::invalid_argument("confusion_matrix: length mismatch");
    if (n_classes <= 0) throw std::invalid_argument("confusion_matrix: n_classes <= 0");
    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(static_cast<std::size_t>(n_classes) * n_classes, 0);
    for (std::size_t i = 0; i < ground_truths.size(); ++i) {
        int g = ground_truths[i], p = predictions[i];
        if (g < 0 || g >= n_classes || p < 0 || p >= n_classes)
            throw std::invalid_argument("confusion_matrix: label out of range");
        ++cm.at(g, p);
    }
    return cm;
}

ClassificationReport report(const ConfusionMatrix& cm) {
    const long long total = cm.total();
    if (total == 0) throw std::invalid_argument("report: empty confusion matrix");

    ClassificationReport rep;
    rep.per_class.resize(cm.n_classes);
    rep.support.resize(cm.n_classes);

    long long trace = 0;
    for (int c = 0; c < cm.n_classes; ++c) {
        long long tp = cm.at(c, c);
        long long row = 0, col = 0;
        for (int k = 0; k < cm.n_classes; ++k) {
            row += cm.at(c, k);
            col += cm.at(k, c);
        }
        long long fp = col - tp, fn = row - tp;
        trace += tp;
        rep.support[c] = row;

        ClassScores& s = rep.per_class[c];
        s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        s.f1 = (s.precision + s.recall) > 0.0
                   ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;

        rep.macro_avg.precision += s.precision;
        rep.macro_avg.recall += s.recall;
        rep.macro_avg.f1 += s.f1;
        rep.weighted_avg.precision += s.precision * row;
        rep.weighted_avg.recall += s.recall * row;
        rep.weighted_avg.f1 += s.f1 * row;
    }
    rep.accuracy = static_cast<double>(trace) / total;
    rep.macro_avg.precision /= cm.n_classes;
    rep.macro_avg.recall /= cm.n_classes;
    rep.macro_avg.f1 /= cm.n_classes;
    rep.weighted_avg.precision /= total;
    rep.weighted_avg.recall /= total;
    rep.weighted_avg.f1 /= total;
    return rep;
}

std::string report_text(const ClassificationReport& rep,
                        const std::vector<std::string>& class_names) {
    std::size_t width = 16;
    for (const std::string& n : class_names) width = std::max(width, n.size());

    std::ostringstream out;
    char buf[128];
    auto row = [&](const std::string& name, double p, double r, double f) {
        std::snprintf(buf, sizeof(buf), "%-*s  %9.2f  %9.2f  %9.2f\n", static_cast<int>(width),
                      name.c_str(), p, r, f);
        out << buf;
    };
    std::snprintf(buf, sizeof(buf), "%-*s  %9s  %9s  %9s\n", static_cast<int>(width), "Class",
                  "Precision", "Recall", "F1 Score");
    out << buf;
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const ClassScores& s = rep.per_class[c];
        row(c < class_names.size() ? class_names[c] : "class_" + std::to_string(c), s.precision,
            s.recall, s.f1);
    }
    std::snprintf(buf, sizeof(buf), "%-*s  %9s  %9s  %9.2f\n", static_cast<int>(width), "Accuracy",
                  "", "", rep.accuracy);
    out << buf;
    row("Macro Average", rep.macro_avg.precision, rep.macro_avg.recall, rep.macro_avg.f1);
    row("Weighted Average", rep.weighted_avg.precision, rep.weighted_avg.recall,
        rep.weighted_avg.f1);
    return out.str();
}

std::string report_csv(const ClassificationReport& rep,
                       const std::vector<std::string>& class_names) {
    std::ostringstream out;
    char buf[160];
    auto row = [&](const std::string& name, double p, double r, double f) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", name.c_str(), p, r, f);
        out << buf;
    };
    out << "class,precision,recall,f1\n";
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const ClassScores& s = rep.per_class[c];
        row(c < class_names.size() ? class_names[c] : "class_" + std::to_string(c), s.precision,
            s.recall, s.f1);
    }
    std::snprintf(buf, sizeof(buf), "accuracy,,,%.17g\n", rep.accuracy);
    out << buf;
    row("macro_avg", rep.macro_avg.precision, rep.macro_avg.recall, rep.macro_avg.f1);
    row("weighted_avg", rep.weighted_avg.precision, rep.weighted_avg.recall, rep.weighted_avg.f1);
    return out.str();
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    for (int g = 0; g < cm.n_classes; ++g) {
        for (int p = 0; p < cm.n_classes; ++p) {
            if (p) out << ',';
            out << cm.at(g, p);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace hqnn
