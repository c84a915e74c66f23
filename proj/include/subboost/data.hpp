#pragma once

#include <string>
#include <vector>

namespace subboost {

struct LabeledExample {
    std::vector<double> x;
    int y = 1; // -1 or +1

    friend bool operator==(const LabeledExample& a, const LabeledExample& b) {
        return a.y == b.y && a.x == b.x;
    }
};

// Ordered training sequence. Construction rejects duplicate feature
// vectors, empty data, dimension mismatches and non-finite values.
class Dataset {
public:
    Dataset(std::vector<LabeledExample> examples);

    std::size_t size() const { return examples_.size(); }
    std::size_t dim() const { return dim_; }
    const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }
    const std::vector<LabeledExample>& examples() const { return examples_; }

    /// New Dataset holding the examples at `indices`, in that order.
    Dataset subsequence(const std::vector<std::size_t>& indices) const;

    /// Position of an identical feature vector, or npos.
    std::size_t find(const std::vector<double>& x) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<LabeledExample> examples_;
    std::size_t dim_ = 0;
};

// CSV ingestion: header row, decimal float feature columns, final
// column "label" in {-1,+1} (or {0,1} with 0 mapped to -1).
Dataset load_csv(const std::string& path);
Dataset parse_csv(std::istream& in, const std::string& origin);

void save_csv(const Dataset& data, const std::string& path);

} // namespace subboost
