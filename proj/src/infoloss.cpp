#include "mciseq/infoloss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mciseq {

FrequencySet compute_frequency_set(const std::vector<SubjectRecordSet>& corpus,
                                   const std::set<std::string>& train_subjects,
                                   std::size_t gamma, std::size_t stride,
                                   AccessLog* log) {
    FrequencySet sf;
    for (const SubjectRecordSet& subj : corpus) {
        if (!train_subjects.count(subj.subject_id)) continue;
        if (log) log->note(subj.subject_id);
        const std::size_t n = count_sequences(subj, gamma, stride);
        if (n == 0)
            throw std::runtime_error("subject " + subj.subject_id + " has zero sequences");
        sf.counts[subj.subject_id] = n;
    }
    if (sf.counts.empty()) throw std::runtime_error("frequency set: no training subjects found");
    sf.min_count = SIZE_MAX;
    sf.max_count = 0;
    for (const auto& [_, n] : sf.counts) {
        sf.min_count = std::min(sf.min_count, n);
        sf.max_count = std::max(sf.max_count, n);
    }
    return sf;
}

double compute_psi(std::size_t count, const FrequencySet& sf, double epsilon,
                   PsiFormula formula) {
    if (epsilon <= 0.0 || epsilon >= 0.5)
        throw std::runtime_error("compute_psi: epsilon must be in (0, 0.5)");
    std::size_t c = count;
    if (c < sf.min_count || c > sf.max_count) {
        std::fprintf(stderr,
                     "warning: sequence count %zu outside training range [%zu, %zu]; clamping\n",
                     c, sf.min_count, sf.max_count);
        c = std::clamp(c, sf.min_count, sf.max_count);
    }
    if (sf.max_count == sf.min_count) return epsilon;
    const double span = static_cast<double>(sf.max_count - sf.min_count);
    if (formula == PsiFormula::printed)
        return epsilon * (static_cast<double>(c) - epsilon / 2.0) / span + epsilon / 2.0;
    return epsilon * static_cast<double>(c - sf.min_count) / span + epsilon / 2.0;
}

SmoothLabel smooth_label(ClassLabel label, double psi) {
    if (psi <= 0.0 || psi >= 0.5)
        throw std::runtime_error("smooth_label: psi must be in (0, 0.5)");
    SmoothLabel out;
    out.psi = psi;
    if (label == ClassLabel::MCI)
        out.dist = {1.0 - psi, psi};
    else
        out.dist = {psi, 1.0 - psi};
    return out;
}

namespace {
constexpr double kProbClamp = 1e-12;

double clamp_prob(double q) { return std::min(std::max(q, kProbClamp), 1.0 - kProbClamp); }

void check_distribution(const std::array<double, 2>& p, const char* what) {
    if (p[0] < 0.0 || p[1] < 0.0 || std::abs(p[0] + p[1] - 1.0) > 1e-9)
        throw std::runtime_error(std::string(what) + " is not a probability distribution");
}
}  // namespace

double kld_loss(const std::array<double, 2>& target, const std::array<double, 2>& predicted) {
    check_distribution(target, "kld_loss: target");
    check_distribution(predicted, "kld_loss: predicted");
    double loss = 0.0;
    for (int i = 0; i < 2; ++i) {
        if (target[i] <= 0.0) continue;
        loss += target[i] * (std::log(target[i]) - std::log(clamp_prob(predicted[i])));
    }
    return loss;
}

double ce_loss(ClassLabel label, const std::array<double, 2>& predicted) {
    check_distribution(predicted, "ce_loss: predicted");
    return -std::log(clamp_prob(predicted[static_cast<int>(label)]));
}

double entropy_initial(std::size_t k) {
    if (k < 1) throw std::runtime_error("entropy_initial: k must be >= 1");
    return static_cast<double>(k) / 2.0;
}

double entropy_after(std::size_t k, std::size_t m) {
    if (k < 1) throw std::runtime_error("entropy_after: k must be >= 1");
    if (m > k) throw std::runtime_error("entropy_after: m exceeds k");
    return static_cast<double>(k - m) / 2.0;
}

double entropy_reduction(std::size_t k) {
    if (k < 1) throw std::runtime_error("entropy_reduction: k must be >= 1");
    return 1.0 / static_cast<double>(k);
}

void write_psi_table_csv(const std::filesystem::path& path, const FrequencySet& sf,
                         double epsilon, PsiFormula formula) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << "subject_id,count,psi\n";
    char buf[64];
    for (const auto& [id, count] : sf.counts) {
        std::snprintf(buf, sizeof(buf), "%.17g", compute_psi(count, sf, epsilon, formula));
        os << id << ',' << count << ',' << buf << '\n';
    }
}

}  // namespace mciseq
