//! Exhaustive enumeration of bounded code families over a finite presheaf.

use std::collections::HashMap;

use crate::presheaf::{FinPresheaf, MorId, ObjId, PshError};

use super::family::{FamilyData, Value};

/// Factorizations of every morphism into generators: `word(m) = [g1..gn]`
/// with transports applied left to right.
fn generator_words(base: &FinPresheaf) -> HashMap<MorId, Vec<MorId>> {
    let cat = base.cat();
    let gens = cat.generators();
    let mut words: HashMap<MorId, Vec<MorId>> = HashMap::new();
    for o in cat.objects() {
        words.insert(cat.identity(o), Vec::new());
    }
    loop {
        let mut grew = false;
        let known: Vec<(MorId, Vec<MorId>)> =
            words.iter().map(|(m, w)| (*m, w.clone())).collect();
        for (m, w) in known {
            for &g in &gens {
                if cat.dst(g) == cat.src(m) {
                    let mg = cat.comp(m, g);
                    words.entry(mg).or_insert_with(|| {
                        grew = true;
                        let mut w2 = w.clone();
                        w2.push(g);
                        w2
                    });
                }
            }
        }
        if !grew {
            break;
        }
    }
    debug_assert_eq!(words.len(), cat.n_mors());
    words
}

/// Enumerates every family of codes over `base` whose carriers are subsets
/// of `{0..bound-1}`, in canonical (fully sorted) order.
pub fn enumerate_families(
    base: &FinPresheaf,
    bound: usize,
    cap: usize,
) -> Result<Vec<FamilyData>, PshError> {
    let cat = base.cat();
    let elements: Vec<(ObjId, usize)> = base.elements().collect();
    let subsets: Vec<Vec<Value>> = (0..(1usize << bound))
        .map(|mask| (0..bound as u16).filter(|v| mask & (1 << v) != 0).collect())
        .collect();
    let words = generator_words(base);
    let gens = cat.generators();

    // cells needing a choice of transport: (element index, generator)
    let gen_cells: Vec<(usize, MorId)> = elements
        .iter()
        .enumerate()
        .flat_map(|(i, &(c, _))| {
            gens.iter()
                .filter(move |&&g| cat.dst(g) == c)
                .map(move |&g| (i, g))
        })
        .collect();

    let mut out: Vec<FamilyData> = Vec::new();
    let mut carriers_choice: Vec<usize> = Vec::new();
    let mut budget: usize = 200_000_000;

    // choose carriers depth-first, then transports depth-first
    fn all_functions(src: &[Value], dst: &[Value]) -> Vec<Vec<Value>> {
        if src.is_empty() {
            return vec![Vec::new()];
        }
        if dst.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Vec::new()];
        for _ in src {
            let mut next = Vec::new();
            for f in &out {
                for &v in dst {
                    let mut f2: Vec<Value> = f.clone();
                    f2.push(v);
                    next.push(f2);
                }
            }
            out = next;
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        base: &FinPresheaf,
        elements: &[(ObjId, usize)],
        subsets: &[Vec<Value>],
        carriers_choice: &[usize],
        gen_cells: &[(usize, MorId)],
        gen_choice: &[Vec<Value>],
        words: &HashMap<MorId, Vec<MorId>>,
    ) -> Option<FamilyData> {
        let cat = base.cat();
        let elem_index: HashMap<(usize, usize), usize> = elements
            .iter()
            .enumerate()
            .map(|(i, &(o, w))| ((o.0, w), i))
            .collect();
        let gen_table: HashMap<(usize, MorId), &Vec<Value>> = gen_cells
            .iter()
            .zip(gen_choice.iter())
            .map(|(&(i, g), t)| ((i, g), t))
            .collect();
        let carrier_of = |i: usize| -> &Vec<Value> { &subsets[carriers_choice[i]] };
        // transport a value from element i along a generator word
        let transport_word = |mut i: usize, mut v: Value, word: &[MorId]| -> Option<Value> {
            for &g in word {
                let (c, w) = elements[i];
                debug_assert_eq!(cat.dst(g), c);
                let tab = gen_table.get(&(i, g))?;
                let p = carrier_of(i).binary_search(&v).ok()?;
                v = tab[p];
                i = elem_index[&(cat.src(g).0, base.restrict(g, w))];
            }
            Some(v)
        };
        let mut carriers: Vec<Vec<Vec<Value>>> =
            cat.objects().map(|c| vec![Vec::new(); base.card(c)]).collect();
        for (i, &(c, w)) in elements.iter().enumerate() {
            carriers[c.0][w] = carrier_of(i).clone();
        }
        let mut maps: Vec<Vec<Vec<Vec<Value>>>> = cat
            .objects()
            .map(|c| vec![Vec::new(); base.card(c)])
            .collect();
        for (i, &(c, w)) in elements.iter().enumerate() {
            for f in cat.into_obj(c) {
                let word = &words[&f];
                let mut tab = Vec::with_capacity(carrier_of(i).len());
                for &v in carrier_of(i) {
                    tab.push(transport_word(i, v, word)?);
                }
                maps[c.0][w].push(tab);
            }
        }
        FamilyData::new(base, carriers, maps).ok()
    }

    fn rec_carriers(
        base: &FinPresheaf,
        elements: &[(ObjId, usize)],
        subsets: &[Vec<Value>],
        carriers_choice: &mut Vec<usize>,
        gen_cells: &[(usize, MorId)],
        words: &HashMap<MorId, Vec<MorId>>,
        out: &mut Vec<FamilyData>,
        cap: usize,
        budget: &mut usize,
        all_functions: &dyn Fn(&[Value], &[Value]) -> Vec<Vec<Value>>,
    ) -> Result<(), PshError> {
        if *budget == 0 {
            return Err(PshError::SizeLimit {
                what: "family enumeration budget".into(),
                size: 0,
                cap: 0,
            });
        }
        *budget -= 1;
        if carriers_choice.len() == elements.len() {
            // choose generator transports
            let cat = base.cat();
            let elem_index: HashMap<(usize, usize), usize> = elements
                .iter()
                .enumerate()
                .map(|(i, &(o, w))| ((o.0, w), i))
                .collect();
            let mut options: Vec<Vec<Vec<Value>>> = Vec::with_capacity(gen_cells.len());
            for &(i, g) in gen_cells {
                let (_c, w) = elements[i];
                let src = &subsets[carriers_choice[i]];
                let j = elem_index[&(cat.src(g).0, base.restrict(g, w))];
                let dst = &subsets[carriers_choice[j]];
                let fns = all_functions(src, dst);
                if fns.is_empty() {
                    return Ok(());
                }
                options.push(fns);
            }
            let mut pick: Vec<usize> = vec![0; gen_cells.len()];
            loop {
                if *budget == 0 {
                    return Err(PshError::SizeLimit {
                        what: "family enumeration budget".into(),
                        size: 0,
                        cap: 0,
                    });
                }
                *budget -= 1;
                let gen_choice: Vec<Vec<Value>> = pick
                    .iter()
                    .enumerate()
                    .map(|(idx, &p)| options[idx][p].clone())
                    .collect();
                if let Some(fam) = assemble(
                    base,
                    elements,
                    subsets,
                    carriers_choice,
                    gen_cells,
                    &gen_choice,
                    words,
                ) {
                    if out.len() >= cap {
                        return Err(PshError::SizeLimit {
                            what: "family enumeration".into(),
                            size: out.len() + 1,
                            cap,
                        });
                    }
                    out.push(fam);
                }
                // advance the multi-index
                let mut k = 0;
                loop {
                    if k == pick.len() {
                        return Ok(());
                    }
                    pick[k] += 1;
                    if pick[k] < options[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
            }
        }
        for s in 0..subsets.len() {
            carriers_choice.push(s);
            rec_carriers(
                base,
                elements,
                subsets,
                carriers_choice,
                gen_cells,
                words,
                out,
                cap,
                budget,
                all_functions,
            )?;
            carriers_choice.pop();
        }
        Ok(())
    }

    if elements.is_empty() {
        // one empty family
        let fam = FamilyData::new(
            base,
            cat.objects().map(|c| vec![Vec::new(); base.card(c)]).collect(),
            cat.objects().map(|c| vec![Vec::new(); base.card(c)]).collect(),
        )?;
        return Ok(vec![fam]);
    }

    rec_carriers(
        base,
        &elements,
        &subsets,
        &mut carriers_choice,
        &gen_cells,
        &words,
        &mut out,
        cap,
        &mut budget,
        &all_functions,
    )?;
    out.sort();
    out.dedup();
    Ok(out)
}
