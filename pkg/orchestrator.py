"""
Main orchestrator for the verification suite.
Runs every check in order and aggregates the certificates into one report.
"""

import os
import random
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import char2_weierstrass as cw
import fiber_combinatorics as fc
import lattice_core as lc
import quartic_family as qf
from binary_fields import BinaryField, PolyGF2k
from config import settings
from schemas import Certificate, IncidenceProblem, VerificationReport, dump_json

INDEX_LEMMA_LATTICES = [f"D{n}" for n in range(6, 16)] + ["E6", "E7", "E8"]
OPTIMAL_FAMILIES = ["I_2n", "I*_2n", "I*_1", "IV*", "III*"]


def aggregate_status(certificates: Sequence[Certificate], errors: Sequence[str] = ()) -> str:
    statuses = {c.status for c in certificates}
    if "refuted" in statuses:
        return "refuted"
    if errors:
        return "error"
    if "not_checked" in statuses or not certificates:
        return "not_checked"
    return "verified"


def certificate(check: str, ok: bool, detail: Dict) -> Certificate:
    return Certificate(check=check, status="verified" if ok else "refuted", detail=detail)


class VerificationOrchestrator:
    """Runs the verification checks and collects their certificates."""

    def __init__(self,
                 seed: Optional[int] = None,
                 workers: Optional[int] = None,
                 verbose: Optional[bool] = None,
                 search_budget: Optional[int] = None):
        """
        Args:
            seed: Seed for every random draw (defaults to DEFAULT_SEED)
            workers: Worker count for point scans
            verbose: Print progress lines to stderr
            search_budget: Largest rank for the factor-through search
        """
        self.seed = settings.default_seed if seed is None else seed
        self.workers = settings.workers if workers is None else workers
        self.verbose = settings.verbose if verbose is None else verbose
        self.search_budget = settings.search_budget_rank if search_budget is None else search_budget
        self.steps: List[Tuple[str, str, Callable[[], List[Certificate]]]] = [
            ("nv_table", "Checking N_v against maximum independent sets", self.check_nv_table),
            ("enumerator", "Enumerating fibre configurations of Euler budget 24", self.check_enumerator),
            ("a2_exclusion", "Enumerating configurations with prescribed A2's", self.check_a2_exclusion),
            ("a2_packing_bound", "Checking N_v^(i) bounds", self.check_a2_packing_bound),
            ("omitted_vertex_bound", "Checking non-reduced fibres minus a component", self.check_omitted_vertex_bound),
            ("l2_table", "Computing 2-lengths of D_n and E_n", self.check_l2_table),
            ("index_lemma", "Checking closure indices of A1^r", self.check_index_lemma),
            ("complement", "Checking complements of d1 in D_n", self.check_complements),
            ("factor_through", "Checking A1^r in D_(2m+1) factors through D_(2m)", self.check_factor_through),
            ("root_subgroups", "Checking root-represented subgroups and parity lifts", self.check_root_subgroups),
            ("discriminant_oracle", "Comparing discriminants with the b-invariant oracle", self.check_discriminant_oracle),
            ("normal_form", "Classifying additive normal forms", self.check_normal_forms),
            ("t23", "Checking t^23 coefficients", self.check_t23),
            ("quartic_family", "Scanning a 12-node quartic", self.check_quartic_family),
            ("census", "Checking incidence census arithmetic", self.check_census),
            ("dwork", "Checking the twisted cubic on the Dwork member", self.check_dwork),
        ]

    def _log(self, message: str) -> None:
        if self.verbose:
            print(message, file=sys.stderr)

    @property
    def check_names(self) -> List[str]:
        return [name for name, _, _ in self.steps]

    def run_all(self, only: Optional[Sequence[str]] = None) -> VerificationReport:
        """
        Run the selected checks (all by default).

        Returns:
            VerificationReport with every certificate and the collected errors
        """
        results = {
            'certificates': [],
            'errors': [],
        }
        unknown = set(only or ()) - set(self.check_names)
        if unknown:
            raise ValueError(f"Unknown checks: {sorted(unknown)}")

        for number, (name, title, step) in enumerate(self.steps, 1):
            if only and name not in only:
                continue
            self._log(f"Step {number}: {title}...")
            try:
                produced = step()
            except Exception as e:
                self._log(f"  {name}: error: {e}")
                results['errors'].append(f"{name}: {e}")
                continue
            for cert in produced:
                self._log(f"  {cert.check}: {cert.status}")
            results['certificates'].extend(produced)

        status = aggregate_status(results['certificates'], results['errors'])
        return VerificationReport(
            seed=self.seed,
            success=status == "verified" and not results['errors'],
            status=status,
            certificates=results['certificates'],
            errors=results['errors'],
        )

    # fibre combinatorics

    def check_nv_table(self) -> List[Certificate]:
        rows = fc.nv_table_report(max_n=40)
        mismatches = [row for row in rows if not row["ok"]]
        return [certificate("nv_table", not mismatches, {"types": len(rows), "mismatches": mismatches})]

    def check_enumerator(self) -> List[Certificate]:
        result = fc.enumerate_configurations(fc.STANDARD_BUDGET)
        ok = (result.max == 12 and result.types_at_max == OPTIMAL_FAMILIES
              and fc.optimal_at_minimal_delta(result))
        return [certificate("enumerator", ok, {
            "max": result.max,
            "types_at_max": result.types_at_max,
            "optimal_configurations": result.count,
            "minimal_delta": fc.optimal_at_minimal_delta(result),
        })]

    def check_a2_exclusion(self) -> List[Certificate]:
        one = fc.a2_exclusion(1)
        four = fc.a2_exclusion(4, needed=11)
        return [
            certificate("a2_exclusion", one["max"] is not None and one["max"] <= 11 and one["excluded"], one),
            certificate("four_a2_exclusion", four["excluded"], four),
        ]

    def check_a2_packing_bound(self) -> List[Certificate]:
        report = fc.a2_packing_bound_report()
        return [certificate("a2_packing_bound", report["ok"], report)]

    def check_omitted_vertex_bound(self) -> List[Certificate]:
        report = fc.omitted_vertex_bound_report()
        return [certificate("omitted_vertex_bound", report["ok"], report)]

    # lattices

    def check_l2_table(self) -> List[Certificate]:
        rows = lc.l2_table(20)
        wrong = [row for row in rows if row["l2"] != row["expected"]]
        return [certificate("l2_table", not wrong, {"rows": rows, "mismatches": wrong})]

    def check_index_lemma(self) -> List[Certificate]:
        certificates = [lc.verify_index_lemma(label) for label in INDEX_LEMMA_LATTICES]
        certificates.append(lc.nonexistence_by_discriminant(5, "D5"))
        return certificates

    def check_complements(self) -> List[Certificate]:
        return [lc.verify_complement_isometry(n) for n in range(4, 15)]

    def check_factor_through(self) -> List[Certificate]:
        certificates = []
        m = 1
        while 2 * m + 1 <= self.search_budget:
            for r in sorted({2, 4, 2 * m} & set(range(1, 2 * m + 1))):
                certificates.append(lc.verify_factor_through(r, m, self.search_budget))
            m += 1
        if not certificates:
            certificates.append(Certificate(check="factor_through", status="not_checked",
                                            detail={"reason": "search budget below D3",
                                                    "budget": self.search_budget}))
        return certificates

    def check_root_subgroups(self) -> List[Certificate]:
        certificates = []
        for label in INDEX_LEMMA_LATTICES:
            r = lc.index_lemma_rank(label)
            if lc.find_disjoint_A1(lc.ade_gram(label), r) is None:
                continue
            certificates.append(lc.verify_root_subgroups(label, r))
        return certificates

    # Weierstrass models

    def check_discriminant_oracle(self) -> List[Certificate]:
        field = BinaryField(8)
        rng = random.Random(self.seed)
        mismatches = []
        for k in range(settings.random_model_count):
            w = cw.random_model(field, rng)
            if cw.discriminant(w) != cw.discriminant_oracle(w):
                mismatches.append(k)
        return [certificate("discriminant_oracle", not mismatches, {
            "field": field.descriptor().model_dump(exclude_none=True),
            "models": settings.random_model_count,
            "mismatches": mismatches,
            "odd_monomials": [list(m) for m in cw.discriminant_monomials_mod2()],
        })]

    def check_normal_forms(self) -> List[Certificate]:
        field = BinaryField(4)
        rng = random.Random(self.seed)
        kinds = ["III", "IV", "other", None]
        counts = {"III": 0, "IV": 0, "other": 0}
        failures = []
        for k in range(settings.random_shape_count):
            w = cw.random_normal_form(field, rng, kinds[k % len(kinds)])
            parts = cw.normal_form_parts(w)
            if parts["a4p"].coeff(0):
                expected = "III"
            elif parts["a3p"].coeff(0):
                expected = "IV"
            else:
                expected = "other"
            kind = cw.classify_additive_normal_form(w)
            counts[kind] += 1
            ok = kind == expected and cw.normal_form_discriminant(w) == cw.discriminant(w)
            if kind == "III":
                square = cw.square_discriminant_check(w)
                ok = ok and square["consistent"]
                if not square["t_divides_a3p"]:
                    ok = ok and not square["delta_is_square"]
                    ok = ok and cw.wild_ramification_at(w, 0, "III")["delta"] == 1
            if kind == "IV":
                ok = ok and cw.wild_ramification_at(w, 0, "IV")["delta"] == 0
            if not ok:
                failures.append(k)

        square_branch = cw.square_discriminant_check(cw.square_discriminant_normal_form(field, rng))
        square_ok = (square_branch["classification"] == "III" and square_branch["delta_is_square"]
                     and square_branch["t_divides_a3p"] and square_branch["excess_ramification"])
        return [certificate("normal_form", not failures and square_ok, {
            "shapes": settings.random_shape_count,
            "counts": counts,
            "failures": failures,
            "square_branch": square_branch,
        })]

    def check_t23(self) -> List[Certificate]:
        field = BinaryField(4)
        rng = random.Random(self.seed)
        failures = []
        for k in range(settings.random_t23_count):
            alpha = field.random_element(rng)
            beta = field.random_element(rng)
            while beta == alpha:
                beta = field.random_element(rng)
            n1 = rng.randrange(1, 23, 2)
            n2 = rng.randrange(1, 24 - n1, 2)
            half = (24 - n1 - n2) // 2
            g = PolyGF2k(field, [field.random_element(rng) for _ in range(half)] + [1])
            result = cw.t23_argument(field, alpha, beta, n1, n2, g)
            if not (result["matches"] and result["nonzero"] and result["degree"] == 24):
                failures.append(k)
        return [certificate("t23", not failures, {"draws": settings.random_t23_count, "failures": failures})]

    # quartics

    def check_quartic_family(self) -> List[Certificate]:
        field = BinaryField(settings.quartic_field_degree)
        params = qf.generic_parameters(field, self.seed)
        report = qf.family_report(params, self.workers)
        X = qf.build_family(params)
        planes = [qf.plane_section(X, row) for row in params.linear]
        plane_nodes = [len(p.node_locus) for p in planes]
        ok = (report.status == "verified" and len(report.nodes) == 12
              and all(p.status == "double-conic" for p in planes)
              and all(k == qf.NODES_PER_PLANE for k in plane_nodes))
        return [certificate("quartic_family", ok, {
            "parameters": params.to_dict(),
            "nodes": report.nodes,
            "family_plane_nodes": plane_nodes,
            "nonreduced_planes": report.nonreduced_planes,
            "census": report.census,
        })]

    def check_census(self) -> List[Certificate]:
        thirteen = fc.census_check(IncidenceProblem(num_points=13, points_per_block=6,
                                                    blocks_per_point=3, max_shared_points=2))
        twelve = fc.census_check(IncidenceProblem(num_points=12, points_per_block=6,
                                                  blocks_per_point=2, max_shared_points=2))
        forced = fc.forced_point_count(4, 6, 2)
        ok = (not thirteen.arithmetic_feasible and forced == 15 and forced > 13
              and twelve.arithmetic_feasible and twelve.num_blocks == 4)
        return [certificate("census", ok, {
            "thirteen": thirteen.model_dump(),
            "twelve": twelve.model_dump(),
            "forced_points": forced,
        })]

    def check_dwork(self) -> List[Certificate]:
        return [qf.dwork_twisted_cubic_check()]


def save_report(report: VerificationReport, directory: Optional[str] = None) -> str:
    """Write a report as JSON into the reports directory and return its path."""
    directory = settings.reports_dir if directory is None else directory
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"verify-all-seed{report.seed}.json")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dump_json(report) + "\n")
    return path
