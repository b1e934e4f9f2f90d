//! Scratch: closed form vs known-truth params.
use bem_core::dlp::{dlp_h_integral, EdgeKernelParams};

fn main() {
    let recs = [
        (0.22119553973789807, 53.51251803215071 * 0.22119553973789807, 9.767234285292888 * 0.22119553973789807,
         0.04934669859387596, 0.9813012248306111 * 0.04934669859387596, -1.9811113600640842 * 0.04934669859387596,
         [0.016510767745435473, 0.037639311412899445, -0.06046797634703215, 0.0]),
        (0.22462063215851802, 52.696540807979865 * 0.22462063215851802, -11.572349321032394 * 0.22462063215851802,
         0.04934669859387596, 0.9813012248306111 * 0.04934669859387596, -1.9811113600640842 * 0.04934669859387596,
         [0.016510767745435473, 0.023746002385200526, -0.04541254459174, 0.0]),
    ];
    let mut vals = Vec::new();
    for (q, qq0, qq1, d, dd0, dd1, p) in recs {
        let params = EdgeKernelParams::from_products(q, qq0, qq1, d, dd0, dd1, p).unwrap();
        match dlp_h_integral(&params) {
            Ok(v) => {
                println!("closed: {v:.15e}");
                vals.push(v);
            }
            Err(_) => println!("closed: FallbackRequired"),
        }
    }
    if vals.len() == 2 {
        println!("closed diff: {:.15e}", vals[0] - vals[1]);
    }
}
