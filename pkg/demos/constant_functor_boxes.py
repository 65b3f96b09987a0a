"""Constant Tambara functors and classical étale extensions.

A box product of constant functors is itself constant: A^c □ B^c is the
constant functor of A ⊗ B, with transfer classes landing on index-scaled
products.  Consequently every étale extension of fields transfers to a
Green étale extension of constant functors over any cyclic group.  The
script verifies the identification on F_4 ⊗ F_4 (which splits) and on an
algebra with nilpotents, then runs the étale transfer for two extensions.
"""

from greenbox import (base_as_algebra, classical_etale_oracle,
                      constant_box_lemma_check, constant_etale_check,
                      kummer_extension, poly_quotient_algebra, prime_field)


def box_identifications():
    print("=== A^c □ B^c ≅ (A ⊗ B)^c ===")
    F2 = prime_field(2)
    F3 = prime_field(3)
    F4 = poly_quotient_algebra(F2, [F2.one, F2.one, F2.one], var="t",
                               name="F_4")
    for n in (2, 4):
        chk = constant_box_lemma_check(F4, F4, n)
        print(f"F_4^c □ F_4^c over C_{n}: level dims {chk.level_dims}, "
              f"tensor dim {chk.tensor_dim}, verified: "
              f"{'yes' if chk.ok else 'NO'}")
    F9 = poly_quotient_algebra(F3, [F3.one, F3.zero, F3.one], var="t",
                               name="F_9")
    dual = poly_quotient_algebra(F3, [F3.zero, F3.zero, F3.one], var="s",
                                 name="F_3[s]/(s²)")
    chk = constant_box_lemma_check(F9, dual, 3)
    print(f"F_9^c □ (F_3[s]/(s²))^c over C_3: verified: "
          f"{'yes' if chk.ok else 'NO'} (nilpotents included)")
    print()


def etale_transfer():
    print("=== étale transfer to constant functors ===")
    F2 = prime_field(2)
    F5 = prime_field(5)
    F4 = poly_quotient_algebra(F2, [F2.one, F2.one, F2.one], var="t",
                               name="F_4")
    F25 = poly_quotient_algebra(F5, [F5.from_int(3), F5.zero, F5.one],
                                var="t", name="F_25")
    for K, L, n in ((F2, F4, 2), (F2, F4, 4), (F5, F25, 3)):
        rep = constant_etale_check(K, L, n)
        print(f"{L.name}^c over {K}, group C_{n}: levelwise dims "
              f"{rep.level_dims}, I = I² everywhere: "
              f"{'yes' if all(rep.verdicts.values()) else 'NO'}")
    trivial = constant_etale_check(F5, base_as_algebra(F5), 2)
    print(f"trivial extension K = L: ideal dims {trivial.ideal_dims}")
    print()


def separability_witnesses():
    print("=== classical separability idempotents ===")
    F5 = prime_field(5)
    F7 = prime_field(7)
    cases = [
        kummer_extension(F5, 2, F5.from_int(2), F5.from_int(-1)),
        kummer_extension(F7, 3, F7.from_int(3), F7.from_int(2)),
    ]
    for E in cases:
        rep = classical_etale_oracle(E)
        print(f"{E.algebra.name}: dim(L⊗L) = {rep.tensor_dim}, "
              f"dim I = {rep.ideal_dim}, I = I²: "
              f"{'yes' if rep.etale else 'NO'}, separability unit found: "
              f"{'yes' if rep.has_separability_unit else 'NO'}")


def main():
    box_identifications()
    etale_transfer()
    separability_witnesses()


if __name__ == "__main__":
    main()
