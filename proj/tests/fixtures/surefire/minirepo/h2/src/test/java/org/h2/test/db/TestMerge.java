package org.h2.test.db;

import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class TestMerge {
    @Test
    public void testMergeBasic() {
        String key = "id";
        if (key.length() > 1) {
            assertEquals("id", key);
        } else {
            fail();
        }
    }
}
