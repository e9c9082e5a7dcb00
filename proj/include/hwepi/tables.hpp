#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hwepi/complex_structure.hpp"
#include "hwepi/model.hpp"

namespace hwepi {

/// Dense joint PMF of the coarse offspring counts (z_r, z_h, z_w), each in [0, w].
class JointPmf3 {
public:
    JointPmf3() = default;
    explicit JointPmf3(int w) : side_(w + 1), p_(static_cast<std::size_t>(side_ * side_ * side_), 0.0) {}

    [[nodiscard]] int side() const { return side_; }
    double& at(int r, int h, int w) { return p_[index(r, h, w)]; }
    [[nodiscard]] double at(int r, int h, int w) const { return p_[index(r, h, w)]; }
    [[nodiscard]] const std::vector<double>& data() const { return p_; }
    std::vector<double>& data() { return p_; }

    [[nodiscard]] double total() const;
    [[nodiscard]] std::array<double, 3> mean() const;
    void add(const JointPmf3& other, double weight);

private:
    [[nodiscard]] std::size_t index(int r, int h, int w) const {
        return static_cast<std::size_t>((r * side_ + h) * side_ + w);
    }
    int side_ = 0;
    std::vector<double> p_;
};

/// g(s1,s2,s3) = E[s1^Z_R s2^Z_H s3^Z_W] over the nonzero cells of a PMF.
class OffspringPgf {
public:
    OffspringPgf() = default;
    explicit OffspringPgf(const JointPmf3& pmf);

    double operator()(double s1, double s2, double s3) const;
    [[nodiscard]] const std::array<double, 3>& mean() const { return mean_; }
    [[nodiscard]] double total() const { return total_; }

private:
    struct Cell {
        int r, h, w;
        double p;
    };
    std::vector<Cell> cells_;
    int max_ = 0;
    std::array<double, 3> mean_{};
    double total_ = 0.0;
};

enum class TableKind { clump, susset };

/// Per-structure offspring laws for one seed type, independent of theta.
/// Mixing with the theta-dependent structure weights gives the table at any
/// theta, so a sweep reuses the same draws at every grid point.
class StructureBank {
public:
    /// Monte Carlo: structure s gets max over `thetas` of ceil(n_mc * weight_s)
    /// draws (at least one per replicate), split into `replicates` independent batches.
    static StructureBank monte_carlo(const ModelParams& params, SeedType seed, TableKind kind,
                                     const std::vector<double>& thetas, std::int64_t n_mc, std::uint64_t base_seed,
                                     int replicates = 10);
    /// Exact per-structure laws; needs a constant infectious period. The
    /// susceptibility-set law equals the clump law in that case.
    static StructureBank exact(const ModelParams& params, SeedType seed);

    [[nodiscard]] JointPmf3 mix(double theta) const;
    [[nodiscard]] std::vector<JointPmf3> mix_replicates(double theta) const;
    /// Per-cell standard error of the stratified estimate at theta (zero when exact).
    [[nodiscard]] JointPmf3 cell_stderr(double theta) const;

    [[nodiscard]] bool is_exact() const { return exact_; }
    [[nodiscard]] int replicates() const { return static_cast<int>(reps_.empty() ? 0 : reps_.front().size()); }
    [[nodiscard]] std::int64_t draws() const { return draws_; }

private:
    int h_ = 2, d_ = 1;
    bool exact_ = false;
    std::vector<std::vector<int>> movers_;
    std::vector<JointPmf3> law_;                 ///< per structure, all draws pooled
    std::vector<std::vector<JointPmf3>> reps_;   ///< per structure, per replicate
    std::vector<std::int64_t> n_;                ///< draws per structure
    std::int64_t draws_ = 0;
};

/// Coarse offspring tables for the three seed types at one theta.
struct CoarseTables {
    TableKind kind = TableKind::susset;
    bool exact = false;
    std::int64_t n_mc = 0;
    std::uint64_t seed = 0;
    std::array<JointPmf3, 3> pmf;
    std::array<JointPmf3, 3> stderr_cells;
    std::vector<std::array<JointPmf3, 3>> replicates;  ///< empty when exact

    [[nodiscard]] const JointPmf3& operator[](SeedType x) const { return pmf[static_cast<std::size_t>(x)]; }
};

struct CoarseBanks {
    std::array<StructureBank, 3> bank;
    TableKind kind = TableKind::susset;
    std::int64_t n_mc = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] CoarseTables at(double theta) const;
};

CoarseBanks build_banks(const ModelParams& params, TableKind kind, bool exact, const std::vector<double>& thetas,
                        std::int64_t n_mc, std::uint64_t seed, int replicates = 10);

/// Tables at params.theta.
CoarseTables build_tables(const ModelParams& params, TableKind kind, bool exact, std::int64_t n_mc,
                          std::uint64_t seed, int replicates = 10);

/// CSV with columns seed_type,z_r,z_h,z_w,prob,stderr (nonzero cells only).
void write_tables_csv(const CoarseTables& t, std::ostream& out);

}  // namespace hwepi
