//! Scoped-thread parallelism for grid rows and profile points.
//!
//! The worker count comes from `MORSE_WIGNER_WORKERS` (default: available
//! parallelism). Work items are whole rows or ε indices, so the assembled
//! values are bit-identical to the serial path no matter the partitioning.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use morse_wigner::grid::{fill_sdf_row, fill_wdf_row, DensityGrid, GridKind, Window};
use morse_wigner::sdf::{sdf_at_energy, SdfProfile};
use morse_wigner::spectrum::MorseParams;
use morse_wigner::Error;

pub fn worker_count() -> usize {
    if let Ok(raw) = std::env::var("MORSE_WIGNER_WORKERS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Run `job` on row indices 0..count pulled from a shared queue.
fn parallel_indices<E: Send>(
    count: usize,
    workers: usize,
    job: impl Fn(usize) -> Result<(), E> + Sync,
) -> Result<(), E> {
    let next = AtomicUsize::new(0);
    let failure: Mutex<Option<E>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(count).max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count || failure.lock().unwrap().is_some() {
                    break;
                }
                if let Err(e) = job(i) {
                    *failure.lock().unwrap() = Some(e);
                    break;
                }
            });
        }
    });
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Row-parallel WDF lattice, identical to `sample_wdf_grid`.
pub fn parallel_wdf_grid(
    params: &MorseParams,
    n: usize,
    window: Window,
    nq: usize,
    np: usize,
    tol: f64,
) -> Result<DensityGrid, Error> {
    if nq < DensityGrid::MIN_RESOLUTION || np < DensityGrid::MIN_RESOLUTION {
        return Err(Error::ResolutionTooSmall { nq, np });
    }
    let mut values = vec![0.0f64; nq * np];
    {
        let rows: Vec<Mutex<&mut [f64]>> = values.chunks_mut(nq).map(Mutex::new).collect();
        parallel_indices(np, worker_count(), |j| {
            let mut row = rows[j].lock().unwrap();
            fill_wdf_row(params, n, &window, nq, np, j, tol, &mut row)
        })?;
    }
    Ok(DensityGrid {
        kind: GridKind::Wdf,
        lambda: params.lambda(),
        n,
        window,
        nq,
        np,
        values,
    })
}

/// Row-parallel SDF lattice from a cached profile.
pub fn parallel_sdf_grid(
    profile: &SdfProfile,
    window: Window,
    nq: usize,
    np: usize,
) -> Result<DensityGrid, Error> {
    if nq < DensityGrid::MIN_RESOLUTION || np < DensityGrid::MIN_RESOLUTION {
        return Err(Error::ResolutionTooSmall { nq, np });
    }
    let mut values = vec![0.0f64; nq * np];
    {
        let rows: Vec<Mutex<&mut [f64]>> = values.chunks_mut(nq).map(Mutex::new).collect();
        parallel_indices::<Error>(np, worker_count(), |j| {
            let mut row = rows[j].lock().unwrap();
            fill_sdf_row(profile, &window, nq, np, j, &mut row);
            Ok(())
        })?;
    }
    Ok(DensityGrid {
        kind: GridKind::Sdf,
        lambda: profile.lambda(),
        n: profile.n(),
        window,
        nq,
        np,
        values,
    })
}

/// Profile construction with the ε points computed in parallel.
pub fn parallel_profile(
    params: &MorseParams,
    n: usize,
    grid_points: usize,
    quad_points: usize,
) -> Result<SdfProfile, Error> {
    let eps = SdfProfile::clustered_grid(grid_points);
    let mut rho_c = vec![0.0f64; eps.len()];
    {
        let slots: Vec<Mutex<&mut f64>> = rho_c.iter_mut().map(Mutex::new).collect();
        parallel_indices(eps.len(), worker_count(), |i| {
            let v = sdf_at_energy(params, n, eps[i], quad_points)?;
            **slots[i].lock().unwrap() = v;
            Ok(())
        })?;
    }
    SdfProfile::from_samples(params, n, eps, rho_c, quad_points)
}
