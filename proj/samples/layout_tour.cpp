// Build a small interval family and walk the origin interval through the
// three generators, printing where each image lands.

#include <cstdio>
#include <memory>

#include "nilflow/realization.hpp"

using namespace nilflow;

int main() {
  ParamSet ps{0.4, 10.0, 10.0, 4.0 / 3.0};
  auto fam = std::make_shared<IntervalFamily>(ps, 4);
  Realization real = build_action(fam);

  std::printf("family: %zu intervals on [0,1], raw mass %.6f\n", fam->count(), fam->total_raw());

  LatticePoint origin{0, 0, 0};
  std::printf("I_(0,0,0) = [%.6f, %.6f], length %.6f\n", fam->left_endpoint(origin),
              fam->right_endpoint(origin), fam->norm_length(origin));

  double x = fam->midpoint(origin);
  for (Letter3 l : {Letter3::E, Letter3::D, Letter3::F}) {
    RWord w;
    w.push(l, 1);
    auto t = real.eval_traced(w, {x, origin});
    std::printf("%c(%.6f) = %.6f, lands in I_%s,  D%c = %.6f\n", letter3_char(l), x, t.y,
                to_string(t.index).c_str(), letter3_char(l), real.derivative(w, x));
  }

  // the commutator word for c shifts the column index by one
  auto t = real.eval_traced(word_c(), {x, origin});
  std::printf("c-word(%.6f) = %.6f, lands in I_%s\n", x, t.y, to_string(t.index).c_str());
  return 0;
}
