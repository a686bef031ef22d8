package org.example.io;

import java.io.IOException;
import org.junit.Test;

public class TryCatchTest {
    @Test
    public void closesOnFailure() {
        Resource r = new Resource();
        try {
            r.read();
            fail("expected failure");
        } catch (IOException e) {
            assertTrue(e.getMessage().contains("closed"));
        } finally {
            r.close();
        }
    }
}
