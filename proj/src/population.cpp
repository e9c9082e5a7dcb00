#include "hwepi/population.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hwepi/csv.hpp"
#include "hwepi/errors.hpp"

namespace hwepi {

Population::Population(int h, int d, std::vector<PersonId> final_workplace,
                       std::vector<std::uint8_t> mover)
    : h_(h), d_(d), final_workplace_(std::move(final_workplace)), mover_(std::move(mover)) {
    const auto n = final_workplace_.size();
    const auto w = static_cast<std::size_t>(h_ * d_);
    const std::size_t m = n / w;
    // Counting sort into the inverted index; ids stay ascending within a workplace.
    std::vector<std::size_t> fill(m + 1, 0);
    for (auto wp : final_workplace_) {
        if (wp < 0 || static_cast<std::size_t>(wp) >= m) throw ConfigError("final workplace id out of range");
        ++fill[static_cast<std::size_t>(wp) + 1];
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (fill[i + 1] != w) throw ConfigError("a final workplace does not have exactly w members");
        fill[i + 1] += fill[i];
    }
    members_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        members_[fill[static_cast<std::size_t>(final_workplace_[i])]++] = static_cast<PersonId>(i);
}

Population Population::from_assignment(int h, int d, std::vector<PersonId> final_workplace,
                                       std::vector<std::uint8_t> mover) {
    if (h < 2 || d < 1) throw ConfigError("need h >= 2 and d >= 1");
    const auto w = static_cast<std::size_t>(h * d);
    if (final_workplace.empty() || final_workplace.size() % w != 0)
        throw ConfigError("population size must be a positive multiple of w");
    if (mover.size() != final_workplace.size()) throw ConfigError("mover flags and workplaces differ in length");
    Population pop(h, d, std::move(final_workplace), std::move(mover));
    pop.validate();
    return pop;
}

std::int64_t Population::mover_count() const {
    return std::count(mover_.begin(), mover_.end(), std::uint8_t{1});
}

std::span<const PersonId> Population::workplace_members(PersonId workplace) const {
    const auto w = static_cast<std::size_t>(this->w());
    return {members_.data() + static_cast<std::size_t>(workplace) * w, w};
}

void Population::validate() const {
    const PersonId n = static_cast<PersonId>(size());
    for (PersonId i = 0; i < n; ++i) {
        const auto flag = mover_[static_cast<std::size_t>(i)];
        if (flag > 1) throw ConfigError("mover flag must be 0 or 1");
        if (!flag && final_workplace(i) != orig_workplace(i))
            throw ConfigError("remainer " + std::to_string(i) + " changed workplace");
    }
    for (PersonId wp = 0; wp < num_workplaces(); ++wp)
        if (static_cast<int>(workplace_members(wp).size()) != w()) throw ConfigError("workplace size != w");
}

Population generate_population(const ModelParams& params, SeedSpec seed) {
    params.validate();
    if (params.n <= 0) throw ConfigError("population size n must be set");
    const auto n = static_cast<std::size_t>(params.n);
    const int w = params.w();
    Rng rng(seed);

    std::vector<std::uint8_t> mover(n, 0);
    std::vector<PersonId> movers;
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < params.theta) {
            mover[i] = 1;
            movers.push_back(static_cast<PersonId>(i));
        }
    }
    // The vacated spots are the movers' own original spots, listed in id order.
    // A uniform shuffle of the movers gives a uniform bijection onto them.
    std::vector<PersonId> shuffled = movers;
    for (std::size_t k = shuffled.size(); k > 1; --k) {
        const auto j = static_cast<std::size_t>(rng.below(k));
        std::swap(shuffled[k - 1], shuffled[j]);
    }
    std::vector<PersonId> final_wp(n);
    for (std::size_t i = 0; i < n; ++i) final_wp[i] = static_cast<PersonId>(i / static_cast<std::size_t>(w));
    for (std::size_t k = 0; k < movers.size(); ++k)
        final_wp[static_cast<std::size_t>(shuffled[k])] = movers[k] / w;

    return Population::from_assignment(params.h, params.d, std::move(final_wp), std::move(mover));
}

std::vector<Complex> extract_complexes(const Population& pop) {
    const int d = pop.d();
    const int h = pop.h();
    std::vector<Complex> out(static_cast<std::size_t>(pop.num_workplaces()));
    for (PersonId wp = 0; wp < pop.num_workplaces(); ++wp) {
        auto& cx = out[static_cast<std::size_t>(wp)];
        cx.workplace = wp;
        cx.groups.assign(static_cast<std::size_t>(2 * d + 1), {});
        for (int j = 0; j < d; ++j) {
            const PersonId first = (wp * d + j) * h;
            for (PersonId i = first; i < first + h; ++i)
                cx.groups[static_cast<std::size_t>(2 * j + (pop.is_mover(i) ? 1 : 0))].push_back(i);
        }
        for (PersonId i : pop.workplace_members(wp))
            if (pop.is_mover(i)) cx.groups.back().push_back(i);
    }
    return out;
}

void write_population_csv(const Population& pop, std::ostream& out) {
    out << kSchemaLine << "\n";
    out << "individual,household,orig_workplace,final_workplace,mover\n";
    const PersonId n = static_cast<PersonId>(pop.size());
    for (PersonId i = 0; i < n; ++i)
        out << i << ',' << pop.household(i) << ',' << pop.orig_workplace(i) << ','
            << pop.final_workplace(i) << ',' << (pop.is_mover(i) ? 1 : 0) << '\n';
}

Population read_population_csv(std::istream& in, int h, int d) {
    CsvReader reader(in, {"individual", "household", "orig_workplace", "final_workplace", "mover"});
    std::vector<PersonId> final_wp;
    std::vector<std::uint8_t> mover;
    std::vector<std::string> row;
    const int w = h * d;
    while (reader.next(row)) {
        const auto id = static_cast<PersonId>(parse_int(row[0]));
        if (id != static_cast<PersonId>(final_wp.size()))
            throw ConfigError("population CSV rows must be ordered by individual id");
        if (parse_int(row[1]) != id / h) throw ConfigError("household column inconsistent with h");
        if (parse_int(row[2]) != id / w) throw ConfigError("orig_workplace column inconsistent with h, d");
        final_wp.push_back(static_cast<PersonId>(parse_int(row[3])));
        const auto flag = parse_int(row[4]);
        if (flag != 0 && flag != 1) throw ConfigError("mover column must be 0 or 1");
        mover.push_back(static_cast<std::uint8_t>(flag));
    }
    return Population::from_assignment(h, d, std::move(final_wp), std::move(mover));
}

}  // namespace hwepi
