"""Round trip through the encrypted-matching protocol on localhost.

The server stores only Paillier ciphertexts of the enrollment bits and
never sees a plaintext feature vector; the client never learns the raw
distance, only the blinded comparison sign.
"""

import numpy as np

from secbio import paillier, smc

server = smc.serve(0, default_theta=3, seed=1)
server.serve_background()
addr = ("127.0.0.1", server.server_address[1])

try:
    keypair = paillier.keygen(512, seed=7)
    rng = np.random.default_rng(2)
    a = rng.integers(0, 2, 16, dtype=np.uint8)

    print(f"modulus: {keypair.public.n.bit_length()} bits")
    print(f"enrolling 16-bit vector under id 'demo' (theta = 3)")
    smc.enroll_remote(addr, "demo", a, keypair, theta=3)

    for flips in (0, 2, 3, 4, 8):
        d = a.copy()
        d[:flips] ^= 1
        accepted = smc.authenticate_remote(addr, "demo", d, keypair)
        print(f"  probe at distance {flips}: "
              f"{'ACCEPT' if accepted else 'REJECT'}")

    template, _ = server.store.get("demo")
    print(f"\nserver-side template: {smc.template_storage_bits(template)} "
          f"bits of ciphertext for a 16-bit feature vector")
finally:
    server.shutdown()
    server.server_close()
