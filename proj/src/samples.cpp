#include "latgeo/samples.hpp"

#include <stdexcept>

namespace latgeo {

std::string to_string(Provenance p) { return p == Provenance::real ? "real" : "fake"; }

Provenance parse_provenance(const std::string& name) {
  if (name == "real") return Provenance::real;
  if (name == "fake") return Provenance::fake;
  throw std::invalid_argument("provenance: expected 'real' or 'fake', got '" + name + "'");
}

SampleSet::SampleSet(Matrix points, Provenance provenance,
                     std::optional<std::vector<int>> labels,
                     std::optional<std::uint64_t> seed)
    : points_(std::move(points)),
      provenance_(provenance),
      labels_(std::move(labels)),
      seed_(seed) {
  if (points_.rows() < 1) throw std::invalid_argument("sample set: need at least one point");
  if (points_.cols() < 1) throw std::invalid_argument("sample set: ambient_dim must be >= 1");
  for (std::size_t i = 0; i < points_.rows(); ++i)
    if (!all_finite(points_.row(i)))
      throw std::invalid_argument("sample set: non-finite coordinate in row " +
                                  std::to_string(i));
  if (labels_ && labels_->size() != points_.rows())
    throw std::invalid_argument("sample set: labels length does not match point count");
}

}  // namespace latgeo
