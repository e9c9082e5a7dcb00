#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "hwepi/model.hpp"

namespace hwepi {

/// Monte Carlo library of paired (severity, fine offspring vector) draws for
/// every constrained complex epidemic: movers (H,l), (W,l) and remainers (j,l).
/// Draws sharing an offspring vector are grouped, so a Laplace-transform
/// fixed point iterates over distinct vectors only.
class FineLibrary {
public:
    struct Entry {
        std::vector<std::pair<int, int>> z;  ///< sparse (fine type index, count)
        std::vector<double> severity;
        std::vector<double> weight;
    };
    struct Source {
        std::vector<Entry> entries;
        std::int64_t draws = 0;
        [[nodiscard]] double total_weight() const;
    };

    /// Draws per mover source: n_lib; per remainer source: n_lib * P(Q_H=j, Q_W=l),
    /// at least min_draws. Each source is stratified over the complex structures.
    static FineLibrary build(const ModelParams& params, std::int64_t n_lib, SeedSpec seed,
                             std::int64_t min_draws = 50);
    /// Pools libraries with equal weight.
    static FineLibrary merge(const std::vector<FineLibrary>& parts);

    [[nodiscard]] int h() const { return h_; }
    [[nodiscard]] int w() const { return w_; }
    [[nodiscard]] int dim() const { return h_ + w_ - 2; }
    /// Fine type index t in [0, dim()).
    [[nodiscard]] const Source& mover(int t) const { return mover_[static_cast<std::size_t>(t)]; }
    /// Remainer seed contacting j housemates and l colleagues; (0,0) is empty.
    [[nodiscard]] const Source& remainer(int j, int l) const {
        return remainer_[static_cast<std::size_t>(j * w_ + l)];
    }
    [[nodiscard]] std::int64_t draws() const;

    /// CSV with columns seed_type,l,y,k,count_mean,severity_mean,draws.
    void write_csv(std::ostream& out) const;

private:
    int h_ = 2, w_ = 2;
    std::vector<Source> mover_;
    std::vector<Source> remainer_;
};

/// Full library plus `replicates` independent sub-libraries of n_lib/replicates
/// draws each; their spread gives standard errors of derived quantities.
struct FineLibrarySet {
    FineLibrary full;
    std::vector<FineLibrary> parts;
};
FineLibrarySet build_fine_libraries(const ModelParams& params, std::int64_t n_lib, std::uint64_t seed,
                                    int replicates = 10);

}  // namespace hwepi
