#pragma once

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace sadet {

/// Base class for all recoverable errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite entries, malformed files, inconsistent records.
struct DataQualityError : Error {
  using Error::Error;
};

/// A requested Hankel window does not fit inside the data horizon.
struct WindowError : Error {
  using Error::Error;
};

/// Matrix or signal dimensions do not match.
struct DimensionError : Error {
  using Error::Error;
};

/// The input data fail a persistency-of-excitation requirement.
struct ExcitationError : Error {
  using Error::Error;
};

/// No candidate sensor set survives the residual test.
struct IdentificationError : Error {
  using Error::Error;
};

/// A subset of sensor channels, identified by 1-based indices in {1..p}.
///
/// The set is kept sorted and duplicate-free. `ambient()` is the total
/// sensor count p, needed to form complements and selector matrices.
class SensorSet {
 public:
  SensorSet() = default;

  SensorSet(std::initializer_list<int> ids, int ambient)
      : SensorSet(std::vector<int>(ids), ambient) {}

  SensorSet(std::vector<int> ids, int ambient) : ids_(std::move(ids)), ambient_(ambient) {
    if (ambient_ < 0) throw std::invalid_argument("SensorSet: ambient sensor count < 0");
    std::sort(ids_.begin(), ids_.end());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (ids_[i] < 1 || ids_[i] > ambient_)
        throw std::invalid_argument("SensorSet: sensor index " + std::to_string(ids_[i]) +
                                    " outside {1.." + std::to_string(ambient_) + "}");
      if (i > 0 && ids_[i] == ids_[i - 1])
        throw std::invalid_argument("SensorSet: duplicate sensor index " +
                                    std::to_string(ids_[i]));
    }
  }

  static SensorSet empty(int ambient) { return SensorSet(std::vector<int>{}, ambient); }

  static SensorSet full(int ambient) {
    std::vector<int> ids(static_cast<std::size_t>(ambient));
    for (int i = 0; i < ambient; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
    return SensorSet(std::move(ids), ambient);
  }

  const std::vector<int>& ids() const { return ids_; }
  int ambient() const { return ambient_; }
  int size() const { return static_cast<int>(ids_.size()); }
  bool is_empty() const { return ids_.empty(); }

  bool contains(int id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  /// True when every index of `other` is also in this set.
  bool contains_all(const SensorSet& other) const {
    return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end());
  }

  SensorSet complement() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(ambient_ - size()));
    for (int i = 1; i <= ambient_; ++i)
      if (!contains(i)) out.push_back(i);
    return SensorSet(std::move(out), ambient_);
  }

  /// 0-based row indices for selecting rows of C or y.
  std::vector<int> row_indices() const {
    std::vector<int> out(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) out[i] = ids_[i] - 1;
    return out;
  }

  bool operator==(const SensorSet& other) const {
    return ambient_ == other.ambient_ && ids_ == other.ids_;
  }
  bool operator!=(const SensorSet& other) const { return !(*this == other); }

  /// Orders by cardinality first, then lexicographically by indices.
  bool operator<(const SensorSet& other) const {
    if (ids_.size() != other.ids_.size()) return ids_.size() < other.ids_.size();
    return ids_ < other.ids_;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(ids_[i]);
    }
    return s + "}";
  }

 private:
  std::vector<int> ids_;
  int ambient_{0};
};

/// All subsets of {1..p} with cardinality at most `max_size`, ordered by
/// cardinality then lexicographically. Includes the empty set.
std::vector<SensorSet> subsets_up_to(int ambient, int max_size);

}  // namespace sadet
