use ge_core::genellipsoid::GenEllipsoid;
use ge_core::polymat::polymat_from_json;
use ge_core::PolyMat;

#[test]
fn readme_example() -> ge_core::Result<()> {
    let p: PolyMat<f64> = polymat_from_json(r#"{"n":2,"d":1,"entries":[[1],[0,1],[1]]}"#)?;
    let e = GenEllipsoid::new(&p, None)?;
    assert!((e.gauge(&[0.5, -0.5])?.value - 1.0).abs() < 1e-12);
    Ok(())
}
