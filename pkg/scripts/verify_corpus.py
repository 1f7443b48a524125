#!/usr/bin/env python3
"""Check every corpus sentence against its team-semantics translations.

For each sentence: the ID translation at {∅}, the negation φ* → ⊥, and (for
sentences with one ∀ and one ∃ block) the linear translation at ∅.  Also
reports whether the φ* mutations are rejected.  Exit status 0 when every
check agrees, 1 otherwise.
"""
import argparse
import sys
import time

from tlk import Status, check_sentence_translation, render, sentence_true
from tlk.corpus import MUTATIONS, PI12_CORPUS, main_corpus
from tlk.finite_model import enumerate_models
from tlk.formula_parser import parse_so
from tlk.logic_ast import Bot, Impl
from tlk.translator import so_to_bid, so_to_id, so_to_ld


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=2)
    ap.add_argument("--seed", type=int, default=1, help="seed for the generated sentences")
    ap.add_argument("-v", "--verbose", action="store_true", help="print each translation")
    args = ap.parse_args(argv)

    ok = True
    print(f"{'sentence':32} {'so2id':8} {'negation':9} {'mutants':10} time")
    for name, phi, sig in main_corpus(args.seed):
        t0 = time.monotonic()
        star = so_to_id(phi)
        v = check_sentence_translation(phi, star, "unit", sig, max_size=args.max_size)
        neg = all(sentence_true(M, Impl(star, Bot())) != sentence_true(M, star)
                  for n in range(1, args.max_size + 1) for M in enumerate_models(sig, n))
        bid = so_to_bid(phi)
        caught = sum(check_sentence_translation(phi, mutate(bid), "unit", sig,
                                                max_size=args.max_size).status is Status.FAIL
                     for mutate in MUTATIONS.values())
        ok &= v.passed and neg
        print(f"{name:32} {v.status.value:8} {'ok' if neg else 'BROKEN':9} "
              f"{caught}/{len(MUTATIONS):<8} {time.monotonic() - t0:.2f}s")
        if args.verbose:
            print(f"  {render(phi)}\n  => {render(star)}")

    print()
    for text in PI12_CORPUS:
        phi = parse_so(text)
        v = check_sentence_translation(phi, so_to_ld(phi), "empty", max_size=args.max_size)
        ok &= v.passed
        print(f"so2ld at ∅  {v.status.value:6} {text}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
