#include "padyn/bounds.hpp"

namespace padyn {

void BoundInputs::validate() const {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
  if (e < 1) throw Error(ErrorCode::InvalidArgument, "ramification index must be >= 1");
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "special fiber count must be >= 1");
  if (dprime < 0) throw Error(ErrorCode::InvalidArgument, "d' must be >= 0");
  BigInt x = q;
  if (x < p) throw Error(ErrorCode::InvalidArgument, "q must be a power of p");
  while (x % p == 0) x /= p;
  if (x != 1) throw Error(ErrorCode::InvalidArgument, "q must be a power of p");
}

int t_max(std::uint64_t p, int e) { return p == 2 ? e : e - 1; }

BigInt bound_general(const BoundInputs& b) {
  b.validate();
  if (b.dprime == 0) throw Error(ErrorCode::DegenerateBound, "d' = 0 gives a zero bound");
  const BigInt unit_part = pow(b.q, static_cast<unsigned>(b.dprime)) - 1;
  const BigInt ppart = pow(BigInt(b.p), static_cast<unsigned>(t_max(b.p, b.e)));
  return b.count * ppart * unit_part;
}

BigInt bound_cubic(std::uint64_t p, int e, const BigInt& q) {
  if (p == 2) throw Error(ErrorCode::UnsupportedPrime, "the cubic bound assumes p > 2");
  BoundInputs in{q + 1, p, e, q, 1};
  in.validate();
  return (q + 1) * pow(BigInt(p), static_cast<unsigned>(e - 1)) * (q - 1);
}

}  // namespace padyn
