#include "subboost/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subboost {

Dataset::Dataset(std::vector<LabeledExample> examples)
    : examples_(std::move(examples)) {
    if (examples_.empty())
        throw std::invalid_argument("Dataset: empty training sequence");
    dim_ = examples_[0].x.size();
    if (dim_ == 0)
        throw std::invalid_argument("Dataset: zero-dimensional features");
    for (const auto& e : examples_) {
        if (e.y != -1 && e.y != 1)
            throw std::invalid_argument("Dataset: label must be -1 or +1");
        if (e.x.size() != dim_)
            throw std::invalid_argument("Dataset: inconsistent feature dimension");
        for (double v : e.x)
            if (!std::isfinite(v))
                throw std::invalid_argument("Dataset: non-finite feature value");
    }

    // no-duplicate invariant on feature vectors
    std::vector<const std::vector<double>*> order(examples_.size());
    for (std::size_t i = 0; i < examples_.size(); ++i) order[i] = &examples_[i].x;
    std::sort(order.begin(), order.end(),
              [](const auto* a, const auto* b) { return *a < *b; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (*order[i - 1] == *order[i]) {
            std::ostringstream msg;
            msg << "Dataset: duplicate feature vector (";
            for (std::size_t d = 0; d < order[i]->size(); ++d)
                msg << (d ? "," : "") << (*order[i])[d];
            msg << ")";
            throw std::invalid_argument(msg.str());
        }
    }
}

Dataset Dataset::subsequence(const std::vector<std::size_t>& indices) const {
    std::vector<LabeledExample> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= examples_.size())
            throw std::invalid_argument("Dataset::subsequence: index out of range");
        out.push_back(examples_[i]);
    }
    return Dataset(std::move(out));
}

std::size_t Dataset::find(const std::vector<double>& x) const {
    for (std::size_t i = 0; i < examples_.size(); ++i)
        if (examples_[i].x == x) return i;
    return npos;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

Dataset parse_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument(origin + ": empty CSV");
    auto header = split_line(line, ',');
    if (header.empty() || header.back() != "label")
        throw std::invalid_argument(origin + ": last CSV column must be 'label'");
    const std::size_t cols = header.size();
    if (cols < 2)
        throw std::invalid_argument(origin + ": no feature columns");

    std::vector<LabeledExample> examples;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_line(line, ',');
        if (fields.size() != cols)
            throw std::invalid_argument(origin + ": wrong field count at line " +
                                        std::to_string(lineno));
        LabeledExample e;
        e.x.reserve(cols - 1);
        for (std::size_t i = 0; i + 1 < cols; ++i) {
            double v = 0;
            try {
                std::size_t pos = 0;
                v = std::stod(fields[i], &pos);
                if (pos != fields[i].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw std::invalid_argument(origin + ": bad feature value '" +
                                            fields[i] + "' at line " +
                                            std::to_string(lineno));
            }
            if (!std::isfinite(v))
                throw std::invalid_argument(origin + ": non-finite feature at line " +
                                            std::to_string(lineno));
            e.x.push_back(v);
        }
        const std::string& lab = fields.back();
        if (lab == "-1" || lab == "-1.0")
            e.y = -1;
        else if (lab == "1" || lab == "+1" || lab == "1.0")
            e.y = 1;
        else if (lab == "0" || lab == "0.0")
            e.y = -1; // documented {0,1} convention
        else
            throw std::invalid_argument(origin + ": bad label '" + lab +
                                        "' at line " + std::to_string(lineno));
        examples.push_back(std::move(e));
    }
    return Dataset(std::move(examples));
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open " + path);
    return parse_csv(in, path);
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_csv: cannot open " + path);
    for (std::size_t d = 0; d < data.dim(); ++d) out << "f" << d << ",";
    out << "label\n";
    out.precision(17);
    for (const auto& e : data.examples()) {
        for (double v : e.x) out << v << ",";
        out << e.y << "\n";
    }
}

} // namespace subboost
