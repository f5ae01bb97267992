#include "sadet/types.hpp"

namespace sadet {

namespace {

void emit_subsets(int ambient, int size, int next, std::vector<int>& current,
                  std::vector<SensorSet>& out) {
  if (static_cast<int>(current.size()) == size) {
    out.emplace_back(current, ambient);
    return;
  }
  for (int id = next; id <= ambient; ++id) {
    current.push_back(id);
    emit_subsets(ambient, size, id + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<SensorSet> subsets_up_to(int ambient, int max_size) {
  if (ambient < 0) throw std::invalid_argument("subsets_up_to: ambient < 0");
  if (max_size < 0) throw std::invalid_argument("subsets_up_to: max_size < 0");
  std::vector<SensorSet> out;
  std::vector<int> current;
  const int cap = std::min(max_size, ambient);
  for (int size = 0; size <= cap; ++size) emit_subsets(ambient, size, 1, current, out);
  return out;
}

}  // namespace sadet
