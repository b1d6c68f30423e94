#include "photoattr/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "photoattr/errors.hpp"

namespace photoattr {

EvalReport report_from_confusion(const AuthorIndex& classes,
                                 const std::vector<std::vector<std::size_t>>& confusion) {
    const std::size_t k = classes.size();
    EvalReport report;
    report.classes = classes;
    report.confusion = confusion;
    report.precision.resize(k);
    report.recall.resize(k);
    report.f1.resize(k);

    std::size_t total = 0, total_tp = 0;
    double macro_sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t tp = confusion[c][c];
        std::size_t fn = 0, fp = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != c) {
                fn += confusion[c][j];
                fp += confusion[j][c];
            }
            total += confusion[c][j];
        }
        total_tp += tp;
        const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
        const double r = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
        const double f = tp == 0 ? 0.0 : 2.0 * p * r / (p + r);
        report.precision[c] = p;
        report.recall[c] = r;
        report.f1[c] = f;
        macro_sum += f;
    }
    report.macro_f = k == 0 ? 0.0 : macro_sum / static_cast<double>(k);
    report.micro_f = total == 0 ? 0.0 : static_cast<double>(total_tp) / static_cast<double>(total);
    return report;
}

EvalReport evaluate(const LinearModel& model, const FeatureMatrix& features,
                    const std::map<std::string, std::string>& labels,
                    const std::vector<std::string>& test_ids) {
    if (test_ids.empty()) fail("EmptyTestSet", "evaluate called with an empty test set");

    const std::size_t k = model.classes.size();
    std::map<std::string, std::size_t> class_index;
    for (std::size_t c = 0; c < k; ++c) class_index[model.classes.at(c)] = c;

    std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
    for (const auto& id : test_ids) {
        auto lab = labels.find(id);
        if (lab == labels.end()) fail("MissingLabel", "test photo has no label: " + id);
        auto true_it = class_index.find(lab->second);
        if (true_it == class_index.end()) {
            fail("UnknownAuthor", "test label not in model classes: " + lab->second);
        }
        const std::string predicted = predict(model, features.row(id));
        confusion[true_it->second][class_index.at(predicted)] += 1;
    }
    return report_from_confusion(model.classes, confusion);
}

std::string EvalReport::to_text() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << "class\tprecision\trecall\tf1\tsupport\n";
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::size_t support = 0;
        for (std::size_t j = 0; j < classes.size(); ++j) support += confusion[c][j];
        os << classes.at(c) << "\t" << precision[c] << "\t" << recall[c] << "\t" << f1[c] << "\t"
           << support << "\n";
    }
    os << "macro-F\t" << macro_f << "\n";
    os << "micro-F\t" << micro_f << "\n";
    return os.str();
}

}  // namespace photoattr
