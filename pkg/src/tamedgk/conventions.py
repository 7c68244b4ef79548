"""Sign and normalization conventions shared by every module.

All of them are fixed here once so that printed values can be reconciled
with the output of the library in a single place.
"""

# (J.alpha)(X1, ..., Xk) = (-1)**k * alpha(J X1, ..., J Xk) when True.
TWIST_J_ON_FORMS = True

# [pi, pi] is SCHOUTEN_SIGN times the usual decomposable expansion
# [X1^X2, Y1^Y2] = sum (-1)**(i+j) [Xi, Yj] ^ (remaining factors).
SCHOUTEN_SIGN = -1

# Natural pairing <X + xi, Y + eta> = PAIRING_FACTOR * (xi(Y) + eta(X)).
PAIRING_FACTOR = "1/2"

CONVENTION_LEDGER = (
    ("bracket", "d alpha(X, Y) = -alpha([X, Y]) on invariant 1-forms and vectors; "
                "de^k = sum a^k_ij e^ij gives [e_i, e_j] = -sum_k a^k_ij e_k"),
    ("exterior derivative", "d a(X0..Xk) = sum_{i<j} (-1)^(i+j) a([Xi, Xj], X0..^i..^j..Xk)"),
    ("wedge", "determinant convention: e^1 ^ e^2 (e_1, e_2) = 1, no 1/k! factors"),
    ("storage", "endomorphism A[i, j] = coefficient of e_i in A e_j; "
                "bilinear B[i, j] = B(e_i, e_j); multivector P[i, j, ..] = P(e^i, e^j, ..)"),
    ("fundamental forms", "omega(X, Y) = g(X, J Y)"),
    ("J on k-forms", "(J a)(X1..Xk) = (-1)^k a(J X1, .., J Xk)  [twist flag = %s]" % TWIST_J_ON_FORMS),
    ("Schouten", "[pi, pi] = -(decomposable Leibniz expansion); agrees with "
                 "-2 #^-1 sigma g(X, [QY, QZ]) for pi = #^-1 g(Q., .)"),
    ("sharp", "pi^# alpha = pi(alpha, .); Lambda^3 pi^# phi (a, b, c) = phi(pi^# a, pi^# b, pi^# c)"),
    ("bivector of skew Q", "Q~ = #_2^-1 S with S(X, Y) = g(QX, Y), i.e. Q~ = g^-1 S g^-1 in indices"),
    ("lowering on T+T*", "a 2-form beta acts as X -> i_X beta = beta(X, .); "
                         "the b-transform in the block formula is applied as exp(+b) on the left"),
    ("pairing", "<X + xi, Y + eta> = 1/2 (xi(Y) + eta(X))"),
    ("complex tensors", "ordered (real, imaginary) pairs of rational tensors"),
    ("twist bivector", "the analysis pipeline uses Q~ built from 1/2 [J+, J-], the normalization "
                       "used when evaluating the six-dimensional example; identities that are "
                       "stated for Q = [J+, J-] use the unhalved commutator"),
)


def convention_text() -> str:
    width = max(len(k) for k, _ in CONVENTION_LEDGER)
    return "\n".join(f"{k.ljust(width)} : {v}" for k, v in CONVENTION_LEDGER)
