//! The group `G` for fixed parameters: lower central series, transfer
//! kernels of the seven maximal subgroups, and their abelianizations.

use capitulation::classes::{ClassSubgroup, ClassVector};
use capitulation::group::{GPresentation, Group, PsiVariant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pres = GPresentation {
        m: 3,
        n: 1,
        q: 1,
        psi: PsiVariant::TauSigma,
    };
    let g = Group::new(pres)?;
    println!(
        "G{pres}: order {}, class {}, coclass {}",
        g.order(),
        g.nilpotency_class(),
        g.coclass()
    );

    let series = g.lower_central_series();
    for (j, w) in series.windows(2).enumerate() {
        println!(
            "gamma_{} / gamma_{} = {}",
            j + 1,
            j + 2,
            g.abelian_invariants(&w[0], &w[1])?
        );
    }

    let rho = g.rho();
    let x = g.mul(&rho, &g.sigma());
    println!(
        "(rho sigma)^2 = {}, order of rho sigma = {}",
        g.pow(&x, 2),
        g.element_order(&x)
    );

    let derived = g.derived_subgroup();
    // the seven index-2 subgroups are kernels of the nonzero characters
    for chi in 1..8u8 {
        let index_two = ClassSubgroup::from_members(ClassVector::all().filter(|v| (v.0 & chi).count_ones() % 2 == 0));
        let h = g.subgroup_over_classes(index_two, &derived);
        println!(
            "H over {index_two}: H/H' = {}, transfer kernel {}",
            g.abelianization(&h),
            g.transfer_kernel(&h)
        );
    }
    Ok(())
}
