#include "karlin/quadrature.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace karlin {

namespace {

// Kronrod 15-point nodes on [-1,1] and weights; the embedded 7-point Gauss rule
// uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    double fl = f(c - h * kXgk[j]);
    double fr = f(c + h * kXgk[j]);
    res_k += kWgk[j] * (fl + fr);
    if (j % 2 == 1) res_g += kWg[j / 2] * (fl + fr);
  }
  double value = res_k * h;
  double err = std::fabs((res_k - res_g) * h);
  return {a, b, value, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_intervals) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
  if (a == b) return {0.0, 0.0, 0};
  std::priority_queue<Segment> heap;
  Segment s0 = gk15(f, a, b);
  double total = s0.value;
  double total_err = s0.error;
  heap.push(s0);
  int n = 1;
  while (total_err > abs_tol) {
    if (n >= max_intervals) {
      throw numerical_error("quadrature failed to converge: [" + std::to_string(a) + "," +
                            std::to_string(b) + "] intervals=" + std::to_string(n) +
                            " err=" + std::to_string(total_err) +
                            " tol=" + std::to_string(abs_tol));
    }
    Segment worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval is at double resolution; its error cannot shrink further
      total_err -= worst.error;
      continue;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  return {total, total_err, n};
}

double alternating_sum(const std::function<double(int)>& term, double abs_tol, int max_terms) {
  std::vector<double> wksp;
  wksp.reserve(64);
  double sum = 0.0;
  int nterm = 0;
  int small_count = 0;
  for (int j = 0; j < max_terms; ++j) {
    double t = term(j);
    double increment;
    if (j == 0) {
      nterm = 1;
      wksp.assign(1, t);
      increment = 0.5 * t;
    } else {
      double tmp = wksp[0];
      wksp[0] = t;
      for (int k = 0; k < nterm - 1; ++k) {
        double dum = wksp[k + 1];
        wksp[k + 1] = 0.5 * (wksp[k] + tmp);
        tmp = dum;
      }
      double next = 0.5 * (wksp[nterm - 1] + tmp);
      if (std::fabs(next) <= std::fabs(wksp[nterm - 1])) {
        wksp.push_back(next);
        ++nterm;
        increment = 0.5 * next;
      } else {
        increment = next;
      }
    }
    sum += increment;
    if (std::fabs(increment) < abs_tol) {
      if (++small_count >= 2 && j >= 3) return sum;
    } else {
      small_count = 0;
    }
  }
  throw numerical_error("alternating series failed to converge within " +
                        std::to_string(max_terms) + " terms (tol=" + std::to_string(abs_tol) +
                        ")");
}

}  // namespace karlin
